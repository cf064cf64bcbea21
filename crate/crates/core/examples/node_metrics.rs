//! Generalized effective resistance and hitting-time distances on a small
//! directed graph.

use digraph_ot::metrics::MetricOptions;
use digraph_ot::{DiGraph, NodeMetric};

fn main() -> digraph_ot::Result<()> {
    // a 4-cycle with one chord
    let g = DiGraph::from_edge_list(&[
        ("a", "b", 1.0),
        ("b", "c", 1.0),
        ("c", "d", 1.0),
        ("d", "a", 1.0),
        ("a", "c", 0.5),
    ])?;
    let r = g.reachability();
    println!("strongly connected: {}", r.strongly_connected);

    for metric in [NodeMetric::Grd, NodeMetric::Htd { beta: 1.0 }] {
        let d = metric.compute(&g, &MetricOptions::default())?;
        println!("\n{} (regularized: {:?})", metric.name(), d.alpha);
        print!("{}", d.values);
        if let Some(res) = d.diagnostics.lyapunov_residual {
            println!("Lyapunov residual {res:.1e}");
        }
    }
    Ok(())
}
