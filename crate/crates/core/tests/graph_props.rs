mod common;

use digraph_ot::io::{read_edge_list, write_edge_list};
use digraph_ot::synth::{cycle_of_cycles, dsbm_ensemble, flip_edge, DsbmSpec, WeightDist};
use digraph_ot::DiGraph;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn small_digraph() -> impl Strategy<Value = DMatrix<f64>> {
    (1usize..=5).prop_flat_map(|n| {
        proptest::collection::vec(prop_oneof![3 => Just(0.0), 2 => 0.1f64..4.0], n * n)
            .prop_map(move |v| DMatrix::from_row_slice(n, n, &v))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn reachability_matches_transitive_closure(w in small_digraph()) {
        let n = w.nrows();
        let g = common::graph(w.clone());
        let r = common::closure(&w);
        let strongly = (0..n).all(|i| (0..n).all(|j| r[i][j]));
        let global = (0..n).any(|j| (0..n).all(|i| r[i][j]));
        let got = g.reachability();
        prop_assert_eq!(got.strongly_connected, strongly);
        prop_assert_eq!(got.has_globally_reachable_node, global);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn regularized_rows_are_stochastic(w in small_digraph().prop_filter("two nodes", |w| w.nrows() >= 2), alpha in 0.05f64..=1.0) {
        let g = common::graph(w).regularize(alpha).unwrap();
        for row in g.weights().row_iter() {
            prop_assert!((row.sum() - 1.0).abs() <= 1e-12);
        }
        prop_assert!(g.reachability().strongly_connected || alpha == 1.0);
    }

    #[test]
    fn edge_list_round_trip(w in small_digraph()) {
        let g = common::graph(w);
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = read_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(back.labels(), g.labels());
        prop_assert_eq!(back.weights(), g.weights());
    }

    #[test]
    fn flips_preserve_undirected_view(n_cycles in 2usize..6, cycle_len in 3usize..6, pick in 0usize..1000) {
        let g = cycle_of_cycles(n_cycles, cycle_len).unwrap();
        prop_assert!(g.reachability().strongly_connected);
        // arcs whose reverse is absent; with two cycles the global arcs form a 2-cycle
        let edges: Vec<_> = g.edges().filter(|&(i, j, _)| g.weights()[(j, i)] == 0.0).collect();
        let (i, j, _) = edges[pick % edges.len()];
        let (s, t) = (&g.labels()[i], &g.labels()[j]);
        let f = flip_edge(&g, s, t).unwrap();
        prop_assert_eq!(f.symmetrized(), g.symmetrized());
        prop_assert_eq!(f.total_weight(), g.total_weight());
        prop_assert_eq!(flip_edge(&f, t, s).unwrap(), g);
    }
}

#[test]
fn ring_sizes_strongly_connected() {
    for n_cycles in 2..8 {
        for cycle_len in 2..8 {
            let g = cycle_of_cycles(n_cycles, cycle_len).unwrap();
            assert!(g.reachability().strongly_connected, "{n_cycles}x{cycle_len}");
            // with two cycles of length two the global and local arcs overlap
            let expected = n_cycles * (cycle_len + 1);
            assert!(g.edge_count() <= expected);
        }
    }
}

#[test]
fn flip_creating_two_way_arc_rejected() {
    let g = DiGraph::from_edge_list(&[("a", "b", 1.0), ("b", "a", 2.0)]).unwrap();
    assert!(flip_edge(&g, "a", "b").is_err());
}

#[test]
fn dsbm_identical_seeds_bit_identical() {
    let spec = |bias| DsbmSpec {
        block_sizes: vec![3, 4, 3],
        p_intra: 0.7,
        p_inter: 0.3,
        direction_bias: bias,
        weight_dist: WeightDist::Uniform { a: 0.5, b: 2.0 },
        intra_reciprocal: false,
        seed: 99,
    };
    let a = dsbm_ensemble(&[(spec(0.5), 5), (spec(0.9), 5)]).unwrap();
    let b = dsbm_ensemble(&[(spec(0.5), 5), (spec(0.9), 5)]).unwrap();
    for (x, y) in a.0.iter().zip(&b.0) {
        let bits = |g: &DiGraph| g.weights().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(x), bits(y));
    }
    assert_eq!(a.1, b.1);
}
