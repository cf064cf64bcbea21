mod common;

use digraph_ot::metrics::lyapunov::{self, LyapunovMethod};
use digraph_ot::metrics::markov::{hitting_probability_matrix, stationary_distribution};
use digraph_ot::metrics::resistance::{grd_values, grounded_system};
use digraph_ot::metrics::{hitting::htd_values, HittingSolver, MetricOptions, NodeMetric};
use digraph_ot::DiGraph;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grd_reduces_to_resistance_on_undirected(seed in any::<u64>(), n in 2usize..=8) {
        let w = common::random_symmetric(n, &mut seeded(seed));
        let got = grd_values(&common::graph(w.clone()), LyapunovMethod::Schur).unwrap();
        let want = common::pinv_resistance(&w);
        prop_assert!((got - want).amax() <= 1e-8);
    }

    #[test]
    fn grd_triangle_inequality(seed in any::<u64>(), n in 3usize..=8) {
        let w = common::random_strongly_connected(n, 0.3, &mut seeded(seed));
        let d = grd_values(&common::graph(w), LyapunovMethod::Schur).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(d[(i, j)], d[(j, i)]);
                for k in 0..n {
                    prop_assert!(d[(i, k)] <= d[(i, j)] + d[(j, k)] + 1e-9);
                }
            }
        }
    }

    #[test]
    fn grd_scales_inverse_sqrt(seed in any::<u64>(), n in 2usize..=8, c in 0.01f64..100.0) {
        let g = common::graph(common::random_strongly_connected(n, 0.3, &mut seeded(seed)));
        let d = grd_values(&g, LyapunovMethod::Schur).unwrap();
        let ds = grd_values(&g.scaled(c).unwrap(), LyapunovMethod::Schur).unwrap();
        prop_assert!((ds - d / c.sqrt()).amax() <= 1e-9);
    }

    #[test]
    fn htd_scale_invariant_with_zero_diagonal(seed in any::<u64>(), n in 2usize..=7, c in 0.01f64..100.0, beta in 0.55f64..=1.0) {
        let g = common::graph(common::random_strongly_connected(n, 0.4, &mut seeded(seed)));
        let d = htd_values(&g, beta, HittingSolver::Auto).unwrap();
        let ds = htd_values(&g.scaled(c).unwrap(), beta, HittingSolver::Auto).unwrap();
        prop_assert!((&ds - &d).amax() <= 1e-12);
        for i in 0..n {
            prop_assert_eq!(d[(i, i)], 0.0);
        }
    }

    #[test]
    fn metrics_follow_relabeling(seed in any::<u64>(), n in 2usize..=7) {
        let mut rng = seeded(seed);
        let g = common::graph(common::random_strongly_connected(n, 0.3, &mut rng));
        let order: Vec<usize> = (0..n).rev().collect();
        let p = g.permuted(&order).unwrap();
        for metric in [NodeMetric::Grd, NodeMetric::Htd { beta: 1.0 }] {
            let a = metric.compute(&g, &MetricOptions::default()).unwrap().values;
            let b = metric.compute(&p, &MetricOptions::default()).unwrap().values;
            for i in 0..n {
                for j in 0..n {
                    prop_assert!((a[(order[i], order[j])] - b[(i, j)]).abs() <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn lyapunov_routes_agree_up_to_40() {
    let mut rng = seeded(40);
    for n in [2, 5, 10, 20, 30, 40] {
        let g = common::graph(common::random_strongly_connected(n, 0.15, &mut rng));
        let sys = grounded_system(&g, LyapunovMethod::Schur).unwrap();
        let eye = DMatrix::identity(n - 1, n - 1);
        let reference = lyapunov::solve_kronecker(&sys.l_tilde, &eye).unwrap();
        assert!(sys.lyapunov_residual() <= 1e-8, "n={n}");
        assert!((&sys.sigma - reference).amax() <= 1e-8, "n={n}");
    }
}

#[test]
fn directed_three_cycle_against_kronecker_oracle() {
    let g = DiGraph::from_edge_list(&[("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)]).unwrap();
    let d = grd_values(&g, LyapunovMethod::Schur).unwrap();
    let k = grd_values(&g, LyapunovMethod::Kronecker).unwrap();
    assert!((&d - &k).amax() < 1e-12);
    assert!((d[(0, 1)] - d[(1, 2)]).abs() < 1e-12 && (d[(0, 1)] - d[(0, 2)]).abs() < 1e-12);
    assert!(d[(0, 1)] > 0.0);
}

#[test]
fn hitting_matches_path_enumeration_on_cycles() {
    for n in 2..=8 {
        let p = DMatrix::from_fn(n, n, |i, j| if j == (i + 1) % n { 1.0 } else { 0.0 });
        let q = hitting_probability_matrix(&p).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    assert_eq!(q[(i, j)], common::path_enumeration(&p, i, j, 30));
                    assert_eq!(q[(i, j)], 1.0);
                }
            }
        }
    }
}

#[test]
fn path_enumeration_converges_to_hitting() {
    // lazy random walk on a 4-ring: the tail beyond 30 steps is tiny
    let p = DMatrix::from_fn(4, 4, |i, j| match (j + 4 - i) % 4 {
        0 => 0.2,
        1 => 0.5,
        3 => 0.3,
        _ => 0.0,
    });
    let q = hitting_probability_matrix(&p).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                let lower = common::path_enumeration(&p, i, j, 30);
                assert!(lower <= q[(i, j)] + 1e-15);
                assert!(q[(i, j)] - lower < 1e-6, "({i},{j}) {} vs {lower}", q[(i, j)]);
            }
        }
    }
}

#[test]
fn stationary_of_random_chains() {
    let mut rng = seeded(7);
    for n in 2..10 {
        let p = common::row_normalize(&common::random_strongly_connected(n, 0.5, &mut rng));
        let pi = stationary_distribution(&p).unwrap();
        assert!((pi.transpose() * &p - pi.transpose()).amax() < 1e-13);
        assert!((pi.sum() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn regularization_only_when_needed() {
    let opts = MetricOptions::default();
    // a->b->c path: globally reachable sink, not strongly connected
    let path = DiGraph::from_edge_list(&[("a", "b", 1.0), ("b", "c", 1.0)]).unwrap();
    assert_eq!(NodeMetric::Grd.compute(&path, &opts).unwrap().alpha, None);
    assert_eq!(NodeMetric::Htd { beta: 1.0 }.compute(&path, &opts).unwrap().alpha, Some(0.85));
    // two sinks: GRD needs the regularization too
    let forked = DiGraph::from_edge_list(&[("a", "b", 1.0), ("a", "c", 1.0)]).unwrap();
    assert_eq!(NodeMetric::Grd.compute(&forked, &opts).unwrap().alpha, Some(0.85));
}
