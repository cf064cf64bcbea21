//! Wasserstein distances between graphs over a shared node vocabulary: the
//! edge weights become distributions on the directed line graph.

use digraph_ot::ensemble::{pairwise_distances, PairwiseParams};
use digraph_ot::{DiGraph, Ensemble, NodeMetric, OtMethod};

fn main() -> digraph_ot::Result<()> {
    let g1 = DiGraph::from_edge_list(&[("a", "b", 2.0), ("b", "c", 1.0), ("c", "a", 1.0)])?;
    let g2 = DiGraph::from_edge_list(&[("a", "b", 1.0), ("b", "c", 2.0), ("c", "a", 1.0)])?;
    let g3 = DiGraph::from_edge_list(&[("b", "a", 1.0), ("c", "b", 1.0), ("a", "c", 1.0)])?;
    let ens = Ensemble::new(vec!["g1".into(), "g2".into(), "g3".into()], vec![g1, g2, g3])?;

    println!("edge universe: {:?}", ens.universe.edges());
    println!("weights:{}", ens.weights.values());
    let line = ens.line_graph()?;
    println!("line graph ({} nodes, {} links):{}", line.graph.n(), line.graph.edge_count(), line.graph.weights());

    for metric in [NodeMetric::Grd, NodeMetric::Htd { beta: 1.0 }] {
        let r = pairwise_distances(OtMethod::Wasserstein, metric, &ens, &PairwiseParams::default())?;
        println!("Wasserstein({}), line graph regularized {:?}:{}", metric.name(), r.meta.regularized, r.values);
    }
    Ok(())
}
