//! Graphs that fail a metric's reachability requirement get the PageRank
//! style mixing `alpha P + (1 - alpha) J / N` before the metric is computed.

use digraph_ot::metrics::MetricOptions;
use digraph_ot::{DiGraph, NodeMetric, RegularizationPolicy};

fn main() -> digraph_ot::Result<()> {
    let path = DiGraph::from_edge_list(&[("a", "b", 1.0), ("b", "c", 1.0)])?;
    let r = path.reachability();
    println!(
        "path a->b->c: strongly connected {}, globally reachable node {}",
        r.strongly_connected, r.has_globally_reachable_node
    );

    let mixed = path.regularize(0.85)?;
    println!("regularized transition matrix:{}", mixed.weights());

    // GRD only needs a globally reachable node; HTD needs strong connectivity
    let opts = MetricOptions::default();
    for metric in [NodeMetric::Grd, NodeMetric::Htd { beta: 1.0 }] {
        let d = metric.compute(&path, &opts)?;
        println!("{}: alpha {:?}", metric.name(), d.alpha);
    }

    let forced = MetricOptions {
        regularization: RegularizationPolicy { alpha: 0.5, force: true },
        ..opts
    };
    let d = NodeMetric::Grd.compute(&path, &forced)?;
    println!("GRD with forced alpha 0.5:{}", d.values);
    Ok(())
}
