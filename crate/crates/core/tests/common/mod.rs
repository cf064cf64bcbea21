//! Independent reference implementations and random instance generators
//! shared by the integration tests.
#![allow(dead_code)]

use digraph_ot::DiGraph;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

pub fn graph(w: DMatrix<f64>) -> DiGraph {
    DiGraph::new(labels(w.nrows()), w).unwrap()
}

/// Connected undirected graph with random positive weights: a random
/// spanning tree plus extra edges.
pub fn random_symmetric(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(n, n);
    for v in 1..n {
        let u = rng.random_range(0..v);
        let x = rng.random_range(0.1..3.0);
        w[(u, v)] = x;
        w[(v, u)] = x;
    }
    for u in 0..n {
        for v in u + 1..n {
            if w[(u, v)] == 0.0 && rng.random::<f64>() < 0.3 {
                let x = rng.random_range(0.1..3.0);
                w[(u, v)] = x;
                w[(v, u)] = x;
            }
        }
    }
    w
}

/// Strongly connected digraph: a Hamiltonian cycle in random order plus
/// random extra arcs.
pub fn random_strongly_connected(n: usize, density: f64, rng: &mut impl Rng) -> DMatrix<f64> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut w = DMatrix::zeros(n, n);
    for k in 0..n {
        w[(order[k], order[(k + 1) % n])] = rng.random_range(0.2..2.0);
    }
    for u in 0..n {
        for v in 0..n {
            if u != v && w[(u, v)] == 0.0 && rng.random::<f64>() < density {
                w[(u, v)] = rng.random_range(0.2..2.0);
            }
        }
    }
    w
}

pub fn row_normalize(w: &DMatrix<f64>) -> DMatrix<f64> {
    let mut p = w.clone();
    for mut row in p.row_iter_mut() {
        let s = row.sum();
        row /= s;
    }
    p
}

/// Classical resistance distance `sqrt((e_i - e_j)^T L^+ (e_i - e_j))`
/// through the Moore-Penrose pseudoinverse of the Laplacian.
pub fn pinv_resistance(w: &DMatrix<f64>) -> DMatrix<f64> {
    let n = w.nrows();
    let deg = DVector::from_fn(n, |i, _| w.row(i).sum());
    let l = DMatrix::from_diagonal(&deg) - w;
    let lp = l.pseudo_inverse(1e-12).unwrap();
    DMatrix::from_fn(n, n, |i, j| (lp[(i, i)] + lp[(j, j)] - 2.0 * lp[(i, j)]).max(0.0).sqrt())
}

/// Transitive closure by repeated squaring of the boolean reachability
/// relation (reflexive).
pub fn closure(w: &DMatrix<f64>) -> Vec<Vec<bool>> {
    let n = w.nrows();
    let mut r: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || w[(i, j)] > 0.0).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// `P_i[tau_j <= tau_i]` summed over all walks `i -> ... -> j` of at most
/// `horizon` steps that avoid `i` and `j` in between.
pub fn path_enumeration(p: &DMatrix<f64>, i: usize, j: usize, horizon: usize) -> f64 {
    fn walk(p: &DMatrix<f64>, at: usize, i: usize, j: usize, mass: f64, left: usize) -> f64 {
        if left == 0 || mass == 0.0 {
            return 0.0;
        }
        let mut total = mass * p[(at, j)];
        for k in 0..p.nrows() {
            if k != i && k != j && p[(at, k)] > 0.0 {
                total += walk(p, k, i, j, mass * p[(at, k)], left - 1);
            }
        }
        total
    }
    walk(p, i, i, j, 1.0, horizon)
}

/// Monte-Carlo estimate of `P_i[tau_j <= tau_i]` for every `j`, from
/// `walks` excursions that start at `i` and stop on return.
pub fn monte_carlo_hits(p: &DMatrix<f64>, i: usize, walks: usize, rng: &mut impl Rng) -> Vec<f64> {
    let n = p.nrows();
    let cdf: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            let mut acc = 0.0;
            (0..n)
                .map(|c| {
                    acc += p[(r, c)];
                    acc
                })
                .collect()
        })
        .collect();
    let mut counts = vec![0usize; n];
    let mut seen = vec![false; n];
    for _ in 0..walks {
        seen.iter_mut().for_each(|s| *s = false);
        let mut at = i;
        loop {
            let u: f64 = rng.random::<f64>() * cdf[at][n - 1];
            at = cdf[at].iter().position(|&c| u < c).unwrap_or(n - 1);
            if at == i {
                break;
            }
            seen[at] = true;
        }
        for (c, s) in counts.iter_mut().zip(&seen) {
            if *s {
                *c += 1;
            }
        }
    }
    counts.into_iter().map(|c| c as f64 / walks as f64).collect()
}

/// All vertices of the transport polytope `{G >= 0 : G 1 = mu, G^T 1 = nu}`,
/// found by solving the constraint system on every set of `m + n - 1` cells.
pub fn polytope_vertices(mu: &[f64], nu: &[f64]) -> Vec<DMatrix<f64>> {
    let (m, n) = (mu.len(), nu.len());
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let k = m + n - 1;
    let mut out: Vec<DMatrix<f64>> = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        // constraints: m row sums and n column sums, one redundant
        let a = DMatrix::from_fn(m + n, k, |r, c| {
            let (i, j) = cells[subset[c]];
            if (r < m && i == r) || (r >= m && j == r - m) {
                1.0
            } else {
                0.0
            }
        });
        let b = DVector::from_iterator(m + n, mu.iter().chain(nu).copied());
        let ata = a.transpose() * &a;
        if let Some(x) = ata.clone().lu().solve(&(a.transpose() * &b)) {
            let residual = (&a * &x - &b).amax();
            let nonsingular = ata.determinant().abs() > 1e-9;
            if nonsingular && residual < 1e-12 && x.iter().all(|v| *v >= -1e-12) {
                let mut g = DMatrix::zeros(m, n);
                for (c, &s) in subset.iter().enumerate() {
                    g[cells[s]] = x[c].max(0.0);
                }
                if !out.iter().any(|h| (h - &g).amax() < 1e-12) {
                    out.push(g);
                }
            }
        }
        // next k-subset of the m*n cells
        let total = cells.len();
        let mut t = k;
        while t > 0 && subset[t - 1] == total - k + t - 1 {
            t -= 1;
        }
        if t == 0 {
            break;
        }
        subset[t - 1] += 1;
        for u in t..k {
            subset[u] = subset[u - 1] + 1;
        }
    }
    out
}

/// Adjusted Rand index from its definition over all pairs of items.
pub fn ari_by_pairs(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut in_a, mut in_b, mut pairs) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let sa = a[i] == a[j];
            let sb = b[i] == b[j];
            pairs += 1.0;
            if sa {
                in_a += 1.0;
            }
            if sb {
                in_b += 1.0;
            }
            if sa && sb {
                both += 1.0;
            }
        }
    }
    let expected = in_a * in_b / pairs;
    (both - expected) / (0.5 * (in_a + in_b) - expected)
}

/// Smallest k-medoids cost over every assignment of `p` items to `k`
/// clusters, with every cluster nonempty.
pub fn best_medoid_cost(d: &DMatrix<f64>, k: usize) -> (f64, Vec<usize>) {
    let p = d.nrows();
    let mut labels = vec![0usize; p];
    let mut best = (f64::INFINITY, labels.clone());
    loop {
        let mut cost = 0.0;
        let mut ok = true;
        for c in 0..k {
            let members: Vec<usize> = (0..p).filter(|&i| labels[i] == c).collect();
            if members.is_empty() {
                ok = false;
                break;
            }
            cost += members
                .iter()
                .map(|&m| members.iter().map(|&i| d[(i, m)]).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
        }
        if ok && cost < best.0 {
            best = (cost, labels.clone());
        }
        let mut t = 0;
        while t < p {
            labels[t] += 1;
            if labels[t] < k {
                break;
            }
            labels[t] = 0;
            t += 1;
        }
        if t == p {
            break;
        }
    }
    best
}
