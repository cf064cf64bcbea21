//! Stationary distributions and return-versus-hit probabilities of
//! discrete-time Markov chains.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// How `P_i[tau_j <= tau_i]` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HittingSolver {
    /// Absorbing system for chains up to [`ABSORBING_MAX_STATES`] states,
    /// fundamental matrix above.
    #[default]
    Auto,
    /// One absorbing linear system per ordered pair, O(n^5) overall.
    Absorbing,
    /// Commute times from the fundamental matrix, O(n^3) overall.
    Fundamental,
}

pub const ABSORBING_MAX_STATES: usize = 48;

/// Transition matrix, stationary distribution, hit-before-return
/// probabilities and the normalized hitting-time matrix of one chain.
#[derive(Debug, Clone)]
pub struct ChainStatistics {
    pub transition: DMatrix<f64>,
    pub stationary: DVector<f64>,
    pub hit_before_return: DMatrix<f64>,
    pub normalized_hitting: DMatrix<f64>,
    pub beta: f64,
}

impl ChainStatistics {
    pub fn new(transition: DMatrix<f64>, beta: f64, solver: HittingSolver) -> Result<Self> {
        let stationary = stationary_distribution(&transition)?;
        let hit_before_return = match solver {
            HittingSolver::Absorbing => hitting_probability_matrix(&transition)?,
            HittingSolver::Fundamental => hitting_probability_fundamental(&transition, &stationary)?,
            HittingSolver::Auto if transition.nrows() <= ABSORBING_MAX_STATES => {
                hitting_probability_matrix(&transition)?
            }
            HittingSolver::Auto => hitting_probability_fundamental(&transition, &stationary)?,
        };
        let n = transition.nrows();
        let normalized_hitting = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                1.0
            } else {
                stationary[i].powf(beta) / stationary[j].powf(1.0 - beta) * hit_before_return[(i, j)]
            }
        });
        Ok(Self {
            transition,
            stationary,
            hit_before_return,
            normalized_hitting,
            beta,
        })
    }
}

fn check_stochastic(p: &DMatrix<f64>) -> Result<usize> {
    let n = p.nrows();
    if p.ncols() != n {
        return Err(Error::Dimension(format!("transition matrix is {:?}", p.shape())));
    }
    for (i, row) in p.row_iter().enumerate() {
        if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("transition", format!("row {i} has a negative or non-finite entry")));
        }
        let s = row.sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("transition", format!("row {i} sums to {s}")));
        }
    }
    Ok(n)
}

/// True when every state reaches every other state through positive
/// transitions.
pub fn is_irreducible(p: &DMatrix<f64>) -> bool {
    let n = p.nrows();
    let reach_all = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                let w = if forward { p[(u, v)] } else { p[(v, u)] };
                if w > 0.0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    n > 0 && reach_all(true) && reach_all(false)
}

/// The unique `pi` with `pi P = pi`, `sum(pi) = 1`, for irreducible `P`.
pub fn stationary_distribution(p: &DMatrix<f64>) -> Result<DVector<f64>> {
    let n = check_stochastic(p)?;
    if !is_irreducible(p) {
        return Err(Error::Reducible);
    }
    // (P^T - I) pi = 0 with the last balance equation replaced by sum(pi) = 1
    let mut a = p.transpose() - DMatrix::identity(n, n);
    a.row_mut(n - 1).fill(1.0);
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let mut pi = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::singular("stationary distribution"))?;
    if pi.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::Numerical("stationary distribution is not strictly positive".into()));
    }
    let s = pi.sum();
    pi /= s;
    Ok(pi)
}

/// `Q[i][j] = P_i[tau_j <= tau_i]` by first-step analysis.
///
/// For each ordered pair `i != j`, `h` solves `h_j = 1`, `h_i = 0` and
/// `h_k = sum_l P[k][l] h_l` elsewhere, and `Q[i][j] = sum_k P[i][k] h_k`.
/// The diagonal is 1 by convention. Pairs are solved in parallel; each
/// result is independent of the schedule.
pub fn hitting_probability_matrix(p: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = check_stochastic(p)?;
    if !is_irreducible(p) {
        return Err(Error::Reducible);
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| hit_before_return(p, i, j))
        .collect::<Result<_>>()?;
    let mut q = DMatrix::identity(n, n);
    for (&(i, j), v) in pairs.iter().zip(values) {
        q[(i, j)] = v;
    }
    Ok(q)
}

fn hit_before_return(p: &DMatrix<f64>, i: usize, j: usize) -> Result<f64> {
    let n = p.nrows();
    let free: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
    let m = free.len();
    let mut direct = p[(i, j)];
    if m > 0 {
        let a = DMatrix::from_fn(m, m, |r, c| {
            let delta = if r == c { 1.0 } else { 0.0 };
            delta - p[(free[r], free[c])]
        });
        let b = DVector::from_fn(m, |r, _| p[(free[r], j)]);
        let h = a
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::singular(format!("absorbing system for pair ({i}, {j})")))?;
        direct += free.iter().zip(h.iter()).map(|(&k, hk)| p[(i, k)] * hk).sum::<f64>();
    }
    if !direct.is_finite() {
        return Err(Error::singular(format!("absorbing system for pair ({i}, {j})")));
    }
    Ok(direct.clamp(0.0, 1.0))
}

/// Same quantity through commute times:
/// `P_i[tau_j < tau_i] = 1 / (pi_i (m_ij + m_ji))` with mean first passage
/// times `m_ij = (Z_jj - Z_ij) / pi_j` and fundamental matrix
/// `Z = (I - P + 1 pi^T)^-1`.
pub fn hitting_probability_fundamental(p: &DMatrix<f64>, pi: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = check_stochastic(p)?;
    if pi.len() != n {
        return Err(Error::Dimension(format!("{} stationary weights for {n} states", pi.len())));
    }
    let mut a = DMatrix::identity(n, n) - p;
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] += pi[j];
        }
    }
    let z = a
        .try_inverse()
        .ok_or_else(|| Error::singular("fundamental matrix"))?;
    let passage = |i: usize, j: usize| (z[(j, j)] - z[(i, j)]) / pi[j];
    let mut q = DMatrix::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let commute = passage(i, j) + passage(j, i);
                let v = 1.0 / (pi[i] * commute);
                if !v.is_finite() {
                    return Err(Error::singular("fundamental matrix"));
                }
                q[(i, j)] = v.clamp(0.0, 1.0);
            }
        }
    }
    Ok(q)
}
