//! Exact earth mover's distance via the network simplex method on the
//! transportation problem.
//!
//! The basis is a spanning tree of the complete bipartite graph between
//! source rows and target columns (m + n - 1 basic cells). Each pivot
//! prices every non-basic cell with the current node potentials, pushes flow
//! around the cycle closed by the entering cell and drops the blocking cell
//! from the tree. Pricing is Dantzig's most negative reduced cost; after a
//! long run of degenerate pivots it falls back to Bland's smallest-index rule,
//! which cannot cycle.

use std::collections::VecDeque;
use std::io::Write;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io;

/// Maximum allowed difference between source and target mass.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A nonnegative mass vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marginal(Vec<f64>);

impl Marginal {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("marginal", "empty"));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::invalid("marginal", format!("entry {w} is negative or not finite")));
        }
        Ok(Self(weights))
    }

    /// Rescales `weights` to sum to one.
    pub fn normalized(weights: &[f64]) -> Result<Self> {
        let m = Self::new(weights.to_vec())?;
        let total = m.total();
        if !(total > 0.0) {
            return Err(Error::invalid("marginal", "total mass is zero"));
        }
        Ok(Self(m.0.into_iter().map(|w| w / total).collect()))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// A coupling matrix and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub gamma: DMatrix<f64>,
    pub objective: f64,
}

impl TransportPlan {
    pub fn row_sums(&self) -> Vec<f64> {
        self.gamma.row_iter().map(|r| r.sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        self.gamma.column_iter().map(|c| c.sum()).collect()
    }

    /// Largest deviation of the plan's marginals from `mu` and `nu`.
    pub fn marginal_error(&self, mu: &Marginal, nu: &Marginal) -> f64 {
        let rows = self.row_sums().into_iter().zip(mu.weights()).map(|(a, b)| (a - b).abs());
        let cols = self.col_sums().into_iter().zip(nu.weights()).map(|(a, b)| (a - b).abs());
        rows.chain(cols).fold(0.0, f64::max)
    }

    pub fn nonzeros(&self) -> usize {
        self.gamma.iter().filter(|v| **v > 0.0).count()
    }

    pub fn write_csv<W: Write>(&self, row_labels: &[String], col_labels: &[String], writer: W) -> Result<()> {
        io::write_matrix(row_labels, col_labels, &self.gamma, writer)
    }
}

/// Optimal plan plus the dual potentials that certify it.
#[derive(Debug, Clone)]
pub struct EmdSolution {
    pub plan: TransportPlan,
    pub row_potentials: Vec<f64>,
    pub col_potentials: Vec<f64>,
    pub pivots: usize,
}

impl EmdSolution {
    /// `sum_i mu_i u_i + sum_j nu_j v_j`.
    pub fn dual_objective(&self, mu: &Marginal, nu: &Marginal) -> f64 {
        let a: f64 = mu.weights().iter().zip(&self.row_potentials).map(|(m, u)| m * u).sum();
        let b: f64 = nu.weights().iter().zip(&self.col_potentials).map(|(m, v)| m * v).sum();
        a + b
    }

    /// Largest violation of `u_i + v_j <= C_ij`.
    pub fn dual_infeasibility(&self, cost: &DMatrix<f64>) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.row_potentials.iter().enumerate() {
            for (j, v) in self.col_potentials.iter().enumerate() {
                worst = worst.max(u + v - cost[(i, j)]);
            }
        }
        worst
    }
}

/// Exact optimal transport between `mu` and `nu` under `cost`.
pub fn emd(mu: &Marginal, nu: &Marginal, cost: &DMatrix<f64>) -> Result<TransportPlan> {
    emd_solve(mu, nu, cost).map(|s| s.plan)
}

/// Like [`emd`], also returning dual potentials.
///
/// Costs must be finite; negative entries are allowed since the LP optimum
/// does not depend on a constant shift.
pub fn emd_solve(mu: &Marginal, nu: &Marginal, cost: &DMatrix<f64>) -> Result<EmdSolution> {
    let (m, n) = (mu.len(), nu.len());
    if cost.shape() != (m, n) {
        return Err(Error::Dimension(format!(
            "cost is {:?} for marginals of sizes {m} and {n}",
            cost.shape()
        )));
    }
    if cost.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("cost", "entries must be finite"));
    }
    let (source_mass, target_mass) = (mu.total(), nu.total());
    if (source_mass - target_mass).abs() > MASS_TOLERANCE {
        return Err(Error::MassMismatch {
            source_mass,
            target_mass,
        });
    }
    let mut simplex = Simplex::new(mu.weights(), nu.weights(), cost);
    simplex.run()?;
    let objective = simplex.flow.component_mul(cost).sum();
    Ok(EmdSolution {
        plan: TransportPlan {
            gamma: simplex.flow,
            objective,
        },
        row_potentials: simplex.u,
        col_potentials: simplex.v,
        pivots: simplex.pivots,
    })
}

struct Simplex<'a> {
    m: usize,
    n: usize,
    cost: &'a DMatrix<f64>,
    flow: DMatrix<f64>,
    basic: DMatrix<bool>,
    // tree adjacency over nodes 0..m (rows) and m..m+n (columns)
    adj: Vec<Vec<usize>>,
    u: Vec<f64>,
    v: Vec<f64>,
    pivots: usize,
    tol: f64,
}

impl<'a> Simplex<'a> {
    fn new(mu: &[f64], nu: &[f64], cost: &'a DMatrix<f64>) -> Self {
        let (m, n) = (mu.len(), nu.len());
        let scale = cost.iter().fold(1.0f64, |a, c| a.max(c.abs()));
        let mut s = Self {
            m,
            n,
            cost,
            flow: DMatrix::zeros(m, n),
            basic: DMatrix::from_element(m, n, false),
            adj: vec![Vec::new(); m + n],
            u: vec![0.0; m],
            v: vec![0.0; n],
            pivots: 0,
            tol: 1e-12 * scale,
        };
        s.northwest_corner(mu, nu);
        s
    }

    /// Staircase initial basis: exactly m + n - 1 cells forming a spanning tree.
    fn northwest_corner(&mut self, mu: &[f64], nu: &[f64]) {
        let (m, n) = (self.m, self.n);
        let mut supply = mu.to_vec();
        let mut demand = nu.to_vec();
        let (mut i, mut j) = (0, 0);
        loop {
            let x = if i == m - 1 && j == n - 1 {
                supply[i].max(0.0)
            } else {
                supply[i].min(demand[j]).max(0.0)
            };
            self.flow[(i, j)] = x;
            self.set_basic(i, j);
            supply[i] -= x;
            demand[j] -= x;
            if i == m - 1 && j == n - 1 {
                break;
            }
            if i == m - 1 {
                j += 1;
            } else if j == n - 1 || supply[i] <= demand[j] {
                i += 1;
            } else {
                j += 1;
            }
        }
    }

    fn set_basic(&mut self, i: usize, j: usize) {
        self.basic[(i, j)] = true;
        self.adj[i].push(self.m + j);
        self.adj[self.m + j].push(i);
    }

    fn unset_basic(&mut self, i: usize, j: usize) {
        self.basic[(i, j)] = false;
        let col = self.m + j;
        self.adj[i].retain(|&x| x != col);
        self.adj[col].retain(|&x| x != i);
    }

    fn update_potentials(&mut self) {
        let m = self.m;
        let mut done = vec![false; m + self.n];
        let mut queue = VecDeque::from([0usize]);
        self.u[0] = 0.0;
        done[0] = true;
        while let Some(a) = queue.pop_front() {
            for &b in &self.adj[a] {
                if done[b] {
                    continue;
                }
                if a < m {
                    self.v[b - m] = self.cost[(a, b - m)] - self.u[a];
                } else {
                    self.u[b] = self.cost[(b, a - m)] - self.v[a - m];
                }
                done[b] = true;
                queue.push_back(b);
            }
        }
    }

    fn entering(&self, bland: bool) -> Option<(usize, usize)> {
        let mut best = None;
        let mut best_rc = -self.tol;
        for i in 0..self.m {
            for j in 0..self.n {
                if self.basic[(i, j)] {
                    continue;
                }
                let rc = self.cost[(i, j)] - self.u[i] - self.v[j];
                if rc < best_rc {
                    if bland {
                        return Some((i, j));
                    }
                    best_rc = rc;
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Tree path from row node `i` to column node `m + j`, as a node list.
    fn tree_path(&self, i: usize, j: usize) -> Vec<usize> {
        let target = self.m + j;
        let mut parent = vec![usize::MAX; self.m + self.n];
        parent[i] = i;
        let mut queue = VecDeque::from([i]);
        while let Some(a) = queue.pop_front() {
            if a == target {
                break;
            }
            for &b in &self.adj[a] {
                if parent[b] == usize::MAX {
                    parent[b] = a;
                    queue.push_back(b);
                }
            }
        }
        let mut path = vec![target];
        let mut cur = target;
        while cur != i {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    fn cell(&self, a: usize, b: usize) -> (usize, usize) {
        if a < self.m {
            (a, b - self.m)
        } else {
            (b, a - self.m)
        }
    }

    fn run(&mut self) -> Result<()> {
        let max_pivots = 10_000 + 50 * self.m * self.n;
        let degenerate_limit = 2 * (self.m + self.n);
        let mut degenerate_run = 0;
        self.update_potentials();
        loop {
            let bland = degenerate_run > degenerate_limit;
            let Some((ei, ej)) = self.entering(bland) else {
                break;
            };
            if self.pivots >= max_pivots {
                return Err(Error::Numerical(format!(
                    "network simplex exceeded {max_pivots} pivots"
                )));
            }
            let path = self.tree_path(ei, ej);
            // Path edges alternate -, +, -, ..., - starting from row ei.
            let cells: Vec<(usize, usize)> = path.windows(2).map(|w| self.cell(w[0], w[1])).collect();
            let mut theta = f64::INFINITY;
            let mut leaving = cells[0];
            for &(i, j) in cells.iter().step_by(2) {
                let f = self.flow[(i, j)];
                let better = f < theta
                    || (f == theta && bland && i * self.n + j < leaving.0 * self.n + leaving.1);
                if better {
                    theta = f;
                    leaving = (i, j);
                }
            }
            let theta = theta.max(0.0);
            self.flow[(ei, ej)] += theta;
            for (t, &(i, j)) in cells.iter().enumerate() {
                if t % 2 == 0 {
                    self.flow[(i, j)] = (self.flow[(i, j)] - theta).max(0.0);
                } else {
                    self.flow[(i, j)] += theta;
                }
            }
            self.flow[leaving] = 0.0;
            self.unset_basic(leaving.0, leaving.1);
            self.set_basic(ei, ej);
            self.pivots += 1;
            if theta > 0.0 {
                degenerate_run = 0;
            } else {
                degenerate_run += 1;
            }
            self.update_potentials();
        }
        Ok(())
    }
}
