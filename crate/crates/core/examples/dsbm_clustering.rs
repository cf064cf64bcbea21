//! Two DSBM classes that differ only in edge direction, clustered from each
//! distance and scored with the adjusted Rand index.

use digraph_ot::ensemble::{pairwise_distances, PairwiseParams, WassersteinModel};
use digraph_ot::eval::{ari, cluster, correlation_cost, correlation_distance_columns, pca_baseline, Partition};
use digraph_ot::synth::{dsbm_ensemble, DsbmSpec, WeightDist};
use digraph_ot::{Ensemble, NodeMetric, OtMethod};
use nalgebra::DMatrix;

fn spec(direction_bias: f64, seed: u64) -> DsbmSpec {
    DsbmSpec {
        block_sizes: vec![5, 5],
        p_intra: 0.6,
        p_inter: 0.4,
        direction_bias,
        weight_dist: WeightDist::Unit,
        intra_reciprocal: true,
        seed,
    }
}

fn main() -> digraph_ot::Result<()> {
    let seed = 0;
    let (graphs, labels) = dsbm_ensemble(&[(spec(0.5, seed), 10), (spec(0.95, seed), 10)])?;
    let ens = Ensemble::from_graphs(graphs)?;
    let truth = Partition::new(labels);

    let mut rows: Vec<(String, DMatrix<f64>)> = Vec::new();
    for method in [OtMethod::Wasserstein, OtMethod::GromovWasserstein] {
        for metric in [NodeMetric::Grd, NodeMetric::Htd { beta: 1.0 }] {
            let r = pairwise_distances(method, metric, &ens, &PairwiseParams::default())?;
            rows.push((format!("{method}({})", metric.name()), r.values));
        }
    }
    rows.push(("PCA".into(), pca_baseline(&ens.weights)?));
    rows.push(("correlation".into(), correlation_distance_columns(&ens.weights)));
    let w = WassersteinModel::with_cost(&ens, correlation_cost(&ens.weights))?;
    let p = ens.len();
    let mut d = DMatrix::zeros(p, p);
    for k in 0..p {
        for l in 0..p {
            if k != l {
                d[(k, l)] = w.distance(k, l)?.0;
            }
        }
    }
    rows.push(("Wasserstein(corr)".into(), d));

    for (name, d) in &rows {
        let c = cluster(d, 2, seed, 8)?;
        println!("{name:<20} ARI {:+.3}", ari(&c.partition, &truth)?);
    }
    Ok(())
}
