mod common;

use digraph_ot::ot::{emd, emd_solve, gromov_wasserstein, gw_objective, GwOptions, Marginal};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn simplex(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn random_cost(m: usize, n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..5.0))
}

fn random_metric(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
    DMatrix::from_fn(n, n, |i, j| ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt())
}

fn permute(c: &DMatrix<f64>, order: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(c.nrows(), c.ncols(), |i, j| c[(order[i], order[j])])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn emd_matches_best_polytope_vertex(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mu, nu) = (simplex(m, &mut rng), simplex(n, &mut rng));
        let cost = random_cost(m, n, &mut rng);
        let best = common::polytope_vertices(&mu, &nu)
            .iter()
            .map(|g| g.dot(&cost))
            .fold(f64::INFINITY, f64::min);
        let plan = emd(&Marginal::new(mu).unwrap(), &Marginal::new(nu).unwrap(), &cost).unwrap();
        prop_assert!((plan.objective - best).abs() <= 1e-10, "{} vs {best}", plan.objective);
    }

    #[test]
    fn emd_strong_duality(seed in any::<u64>(), m in 1usize..=20, n in 1usize..=20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = Marginal::new(simplex(m, &mut rng)).unwrap();
        let nu = Marginal::new(simplex(n, &mut rng)).unwrap();
        let cost = random_cost(m, n, &mut rng);
        let sol = emd_solve(&mu, &nu, &cost).unwrap();
        prop_assert!((sol.plan.objective - sol.dual_objective(&mu, &nu)).abs() <= 1e-9);
        prop_assert!(sol.dual_infeasibility(&cost) <= 1e-9);
        prop_assert!(sol.plan.marginal_error(&mu, &nu) <= 1e-12);
        prop_assert!(sol.plan.gamma.iter().all(|&g| g >= 0.0));
        // a basic solution has at most m + n - 1 nonzeros
        prop_assert!(sol.plan.nonzeros() < m + n);
    }
}

#[test]
fn polytope_oracle_sanity() {
    // 2x2 with uniform marginals: the two permutation couplings
    let v = common::polytope_vertices(&[0.5, 0.5], &[0.5, 0.5]);
    assert_eq!(v.len(), 2);
}

#[test]
fn gw_two_point_spaces_against_grid() {
    let c1 = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let c2 = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 3.0, 0.0]);
    let grid = (0..=1000)
        .map(|s| {
            let t = 0.5 * s as f64 / 1000.0;
            let g = DMatrix::from_row_slice(2, 2, &[t, 0.5 - t, 0.5 - t, t]);
            gw_objective(&c1, &c2, &g)
        })
        .fold(f64::INFINITY, f64::min);
    let u = Marginal::uniform(2);
    let sol = gromov_wasserstein(&c1, &c2, &u, &u, &GwOptions::default()).unwrap();
    assert!((sol.plan.objective - grid).abs() <= 1e-9, "{} vs {grid}", sol.plan.objective);
    assert!((sol.plan.objective - gw_objective(&c1, &c2, &sol.plan.gamma)).abs() <= 1e-12);
    // both spaces are two points at fixed distance: 2 * (3 - 1)^2 / 4
    assert!((grid - 2.0).abs() <= 1e-12);
}

#[test]
fn gw_self_distance_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [1, 2, 5, 10, 20, 30] {
        let c = random_metric(n, &mut rng);
        let u = Marginal::uniform(n);
        let sol = gromov_wasserstein(&c, &c, &u, &u, &GwOptions::default()).unwrap();
        assert!(sol.plan.objective <= 1e-9, "n={n}: {}", sol.plan.objective);
    }
}

#[test]
fn gw_relabel_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [4, 8, 15] {
        let a = random_metric(n, &mut rng);
        let b = random_metric(n + 2, &mut rng);
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let pa = permute(&a, &order);
        let (ua, ub) = (Marginal::uniform(n), Marginal::uniform(n + 2));
        let opts = GwOptions::default();
        let recovered = gromov_wasserstein(&a, &pa, &ua, &ua, &opts).unwrap();
        assert!(recovered.plan.objective <= 1e-9, "n={n}: {}", recovered.plan.objective);
        // the permuted copy sees the same landscape, so the same local optimum is reachable
        let d = gromov_wasserstein(&a, &b, &ua, &ub, &opts).unwrap().plan.objective;
        let dp = gromov_wasserstein(&pa, &b, &ua, &ub, &opts).unwrap().plan.objective;
        assert!(d >= 0.0 && dp >= 0.0);
        assert!((d - dp).abs() <= 0.25 * d.max(dp) + 1e-12, "n={n}: {d} vs {dp}");
    }
}

#[test]
fn gw_plans_respect_marginals() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (m, n) in [(3, 7), (9, 4), (12, 12)] {
        let (a, b) = (random_metric(m, &mut rng), random_metric(n, &mut rng));
        let p = Marginal::new(simplex(m, &mut rng)).unwrap();
        let q = Marginal::new(simplex(n, &mut rng)).unwrap();
        let sol = gromov_wasserstein(&a, &b, &p, &q, &GwOptions::default()).unwrap();
        assert!(sol.plan.marginal_error(&p, &q) <= 1e-12);
        assert!(sol.history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}
