//! Gromov-Wasserstein distance with square loss, solved by conditional
//! gradient (Frank-Wolfe) with exact line search.
//!
//! For couplings `G` with row sums `r` and column sums `c`,
//!
//! ```text
//! E(G) = sum_{i,k,j,l} (C1[i,k] - C2[j,l])^2 G[i,j] G[k,l]
//!      = r^T (C1.^2) r + c^T (C2.^2) c - 2 <G, C1 G C2^T>.
//! ```
//!
//! On the transport polytope the first two terms are constant, so each
//! linearized step is an exact transport problem with cost
//! `-2 (C1 G C2^T + C1^T G C2)` and the objective along the segment towards
//! its solution is a quadratic in the step size.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::emd::{emd, Marginal, TransportPlan};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GwOptions {
    pub max_iter: usize,
    /// Stop when the relative objective decrease falls below this.
    pub tol: f64,
    /// Number of initial couplings: the product coupling, then up to
    /// `n_starts - 1` anchored couplings (see [`anchor_pairs`]), then seeded
    /// random perturbations of the product coupling for any remainder.
    pub n_starts: usize,
    pub seed: u64,
}

impl Default for GwOptions {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            tol: 1e-9,
            n_starts: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GwSolution {
    pub plan: TransportPlan,
    /// False when the winning start hit `max_iter`.
    pub converged: bool,
    pub iterations: usize,
    pub best_start: usize,
    /// Objective after each iteration of the winning start, starting with
    /// the initial coupling.
    pub history: Vec<f64>,
}

/// Full quartic objective evaluated at `gamma`, using its actual marginals.
pub fn gw_objective(c1: &DMatrix<f64>, c2: &DMatrix<f64>, gamma: &DMatrix<f64>) -> f64 {
    let r = gamma.column_sum();
    let c = gamma.row_sum().transpose();
    let sq1 = c1.component_mul(c1);
    let sq2 = c2.component_mul(c2);
    let t1 = (r.transpose() * &sq1 * &r)[(0, 0)];
    let t2 = (c.transpose() * &sq2 * &c)[(0, 0)];
    let cross = gamma.dot(&(c1 * gamma * c2.transpose()));
    (t1 + t2 - 2.0 * cross).max(0.0)
}

pub fn gromov_wasserstein(
    c1: &DMatrix<f64>,
    c2: &DMatrix<f64>,
    p: &Marginal,
    q: &Marginal,
    opts: &GwOptions,
) -> Result<GwSolution> {
    let (m, n) = (p.len(), q.len());
    if c1.shape() != (m, m) || c2.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "costs {:?} and {:?} for marginals of sizes {m} and {n}",
            c1.shape(),
            c2.shape()
        )));
    }
    if c1.iter().chain(c2.iter()).any(|v| !v.is_finite()) {
        return Err(Error::invalid("cost", "entries must be finite"));
    }
    if opts.n_starts == 0 {
        return Err(Error::invalid("n_starts", "at least one start is required"));
    }
    let product = DMatrix::from_fn(m, n, |i, j| p.weights()[i] * q.weights()[j]);
    let anchors = two_sided_anchors(c1, c2, p, q, opts.n_starts - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<GwSolution> = None;
    for start in 0..opts.n_starts {
        let init = if start == 0 {
            product.clone()
        } else if let Some(&(i, j)) = anchors.get(start - 1) {
            anchored_coupling(c1, c2, p, q, i, j)?
        } else {
            // mix the product coupling with a random vertex of the polytope
            let noise = DMatrix::from_fn(m, n, |_, _| rng.random::<f64>());
            let vertex = emd(p, q, &noise)?.gamma;
            let lambda = rng.random_range(0.5..=1.0);
            &product * (1.0 - lambda) + vertex * lambda
        };
        let mut sol = descend(c1, c2, p, q, init, opts)?;
        sol.best_start = start;
        if best.as_ref().is_none_or(|b| sol.plan.objective < b.plan.objective) {
            best = Some(sol);
        }
    }
    let best = best.expect("at least one start");
    if !best.converged {
        log::warn!(
            "Gromov-Wasserstein did not converge within {} iterations",
            opts.max_iter
        );
    }
    Ok(best)
}

/// 1-D Wasserstein distance between two weighted samples.
fn profile_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let sorted = |v: &[(f64, f64)]| {
        let mut v = v.to_vec();
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    // integrate |F_a - F_b| over the merged breakpoints
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (0.0f64, 0.0f64);
    let mut x = a[0].0.min(b[0].0);
    let mut total = 0.0;
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(u), Some(v)) => u.0.min(v.0),
            (Some(u), None) => u.0,
            (None, Some(v)) => v.0,
            (None, None) => unreachable!(),
        };
        total += (fa - fb).abs() * (next - x);
        x = next;
        while i < a.len() && a[i].0 == next {
            fa += a[i].1;
            i += 1;
        }
        while j < b.len() && b[j].0 == next {
            fb += b[j].1;
            j += 1;
        }
    }
    total
}

fn profiles(c: &DMatrix<f64>, w: &Marginal, i: usize) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let out = (0..c.nrows()).map(|k| (c[(i, k)], w.weights()[k])).collect();
    let inc = (0..c.nrows()).map(|k| (c[(k, i)], w.weights()[k])).collect();
    (out, inc)
}

/// Candidate correspondences `(i, j)` for anchored starts.
///
/// `i` is the node of the first space with the most spread-out distance
/// row; the `j` are the nodes of the second space whose outgoing and
/// incoming distance profiles are closest to those of `i`.
pub fn anchor_pairs(
    c1: &DMatrix<f64>,
    c2: &DMatrix<f64>,
    p: &Marginal,
    q: &Marginal,
    count: usize,
) -> Vec<(usize, usize)> {
    let (m, n) = (p.len(), q.len());
    if count == 0 || m == 0 || n == 0 {
        return Vec::new();
    }
    let spread = |i: usize| {
        let row = (0..m).map(|k| c1[(i, k)] + c1[(k, i)]);
        let mean = row.clone().zip(p.weights()).map(|(v, w)| v * w).sum::<f64>();
        row.zip(p.weights()).map(|(v, w)| w * (v - mean).powi(2)).sum::<f64>()
    };
    let i = (0..m)
        .max_by(|&a, &b| spread(a).total_cmp(&spread(b)).then(b.cmp(&a)))
        .expect("nonempty");
    let (out_i, in_i) = profiles(c1, p, i);
    let mut scored: Vec<(f64, usize)> = (0..n)
        .map(|j| {
            let (out_j, in_j) = profiles(c2, q, j);
            (profile_distance(&out_i, &out_j) + profile_distance(&in_i, &in_j), j)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    scored.into_iter().take(count).map(|(_, j)| (i, j)).collect()
}

/// Anchors chosen from each side in turn, so that swapping the two spaces
/// yields the same set of starts.
fn two_sided_anchors(
    c1: &DMatrix<f64>,
    c2: &DMatrix<f64>,
    p: &Marginal,
    q: &Marginal,
    count: usize,
) -> Vec<(usize, usize)> {
    let forward = anchor_pairs(c1, c2, p, q, count);
    let backward = anchor_pairs(c2, c1, q, p, count);
    let mut out = Vec::with_capacity(count);
    let mut both = forward.into_iter().zip(backward.into_iter().map(|(j, i)| (i, j)));
    while out.len() < count {
        let Some((a, b)) = both.next() else { break };
        for pair in [a, b] {
            if out.len() < count && !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    out
}

/// Vertex coupling grown from the correspondence `i -> j`.
///
/// Pairs are added greedily: the next pair is the unmatched `(k, l)` whose
/// distances to all pairs matched so far disagree least. The accumulated
/// disagreement is then used as the cost of an exact transport problem.
/// Committing to one pair at a time resolves ties (for instance the two
/// mirror images on a ring) consistently.
fn anchored_coupling(
    c1: &DMatrix<f64>,
    c2: &DMatrix<f64>,
    p: &Marginal,
    q: &Marginal,
    i: usize,
    j: usize,
) -> Result<DMatrix<f64>> {
    let (m, n) = (p.len(), q.len());
    let mut cost = DMatrix::<f64>::zeros(m, n);
    let mut row_used = vec![false; m];
    let mut col_used = vec![false; n];
    let (mut a, mut b) = (i, j);
    for _ in 0..m.min(n) {
        row_used[a] = true;
        col_used[b] = true;
        for k in 0..m {
            for l in 0..n {
                cost[(k, l)] += (c1[(a, k)] - c2[(b, l)]).abs() + (c1[(k, a)] - c2[(l, b)]).abs();
            }
        }
        let next = (0..m)
            .filter(|&k| !row_used[k])
            .flat_map(|k| (0..n).filter(|&l| !col_used[l]).map(move |l| (k, l)))
            .min_by(|x, y| cost[*x].total_cmp(&cost[*y]));
        match next {
            Some((k, l)) => (a, b) = (k, l),
            None => break,
        }
    }
    Ok(emd(p, q, &cost)?.gamma)
}

fn descend(
    c1: &DMatrix<f64>,
    c2: &DMatrix<f64>,
    p: &Marginal,
    q: &Marginal,
    mut gamma: DMatrix<f64>,
    opts: &GwOptions,
) -> Result<GwSolution> {
    let c1t = c1.transpose();
    let c2t = c2.transpose();
    let mut energy = gw_objective(c1, c2, &gamma);
    let mut history = vec![energy];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let forward = c1 * &gamma * &c2t;
        let backward = &c1t * &gamma * c2;
        let mut grad = (&forward + &backward) * -2.0;
        let shift = grad.min();
        grad.add_scalar_mut(-shift);
        let target = emd(p, q, &grad)?.gamma;
        let dir = target - &gamma;

        // E(G + tD) - E(G) = a t^2 + b t on the polytope
        let a = -2.0 * dir.dot(&(c1 * &dir * &c2t));
        let b = -2.0 * (dir.dot(&forward) + gamma.dot(&(c1 * &dir * &c2t)));
        let step = if a > 0.0 {
            (-b / (2.0 * a)).clamp(0.0, 1.0)
        } else if a + b < 0.0 {
            1.0
        } else {
            0.0
        };
        if step == 0.0 {
            converged = true;
            break;
        }
        let candidate = &gamma + &dir * step;
        let next = gw_objective(c1, c2, &candidate);
        if next > energy {
            // rounding at a stationary point
            converged = true;
            break;
        }
        let decrease = energy - next;
        gamma = candidate;
        energy = next;
        history.push(energy);
        if decrease <= opts.tol * energy.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    gamma.iter_mut().for_each(|v| *v = v.max(0.0));
    Ok(GwSolution {
        plan: TransportPlan {
            gamma,
            objective: energy,
        },
        converged,
        iterations,
        best_start: 0,
        history,
    })
}
