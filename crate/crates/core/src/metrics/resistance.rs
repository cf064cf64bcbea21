//! Generalized effective resistance for directed graphs.
//!
//! With a grounding matrix `Q`, the grounded Laplacian is `L~ = Q L Q^T`.
//! `Sigma` solves `L~ Sigma + Sigma L~^T = I`, `X = 2 Q^T Sigma Q`, and the
//! distance between nodes `k` and `j` is
//! `sqrt((e_k - e_j)^T X (e_k - e_j))`. On undirected graphs `X` equals the
//! Laplacian pseudoinverse, so this reduces to the classical resistance
//! distance.

use nalgebra::DMatrix;

use super::grounding::grounding_matrix;
use super::lyapunov::{self, LyapunovMethod};
use crate::error::{Error, Result};
use crate::graph::DiGraph;

/// All intermediate matrices of the resistance computation.
#[derive(Debug, Clone)]
pub struct GroundedSystem {
    pub q: DMatrix<f64>,
    pub l_tilde: DMatrix<f64>,
    pub sigma: DMatrix<f64>,
    pub x: DMatrix<f64>,
}

impl GroundedSystem {
    /// `|| L~ Sigma + Sigma L~^T - I ||_F`.
    pub fn lyapunov_residual(&self) -> f64 {
        let m = self.l_tilde.nrows();
        lyapunov::residual(&self.l_tilde, &self.sigma, &DMatrix::identity(m, m))
    }

    /// Pairwise distances from `X`. The matrix is filled from the upper
    /// triangle, so it is exactly symmetric with an exactly zero diagonal.
    pub fn distances(&self) -> DMatrix<f64> {
        let n = self.x.nrows();
        let mut d = DMatrix::zeros(n, n);
        for k in 0..n {
            for j in k + 1..n {
                let quad = self.x[(k, k)] + self.x[(j, j)] - self.x[(k, j)] - self.x[(j, k)];
                let v = quad.max(0.0).sqrt();
                d[(k, j)] = v;
                d[(j, k)] = v;
            }
        }
        d
    }
}

/// Builds the grounded system with the default Helmert grounding matrix.
///
/// Requires a globally reachable node; otherwise the Lyapunov solution is not
/// unique and the caller must regularize first.
pub fn grounded_system(graph: &DiGraph, method: LyapunovMethod) -> Result<GroundedSystem> {
    let q = grounding_matrix(graph.n())?;
    grounded_system_with(graph, q, method)
}

/// Same as [`grounded_system`] with a caller-supplied grounding matrix.
pub fn grounded_system_with(
    graph: &DiGraph,
    q: DMatrix<f64>,
    method: LyapunovMethod,
) -> Result<GroundedSystem> {
    let n = graph.n();
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    if q.shape() != (n - 1, n) {
        return Err(Error::Dimension(format!(
            "grounding matrix is {:?}, expected ({}, {n})",
            q.shape(),
            n - 1
        )));
    }
    if !graph.reachability().has_globally_reachable_node {
        return Err(Error::NoGloballyReachableNode);
    }
    let l_tilde = &q * graph.laplacian() * q.transpose();
    let eye = DMatrix::identity(n - 1, n - 1);
    let sigma = lyapunov::solve(&l_tilde, &eye, method)?;
    let x = q.transpose() * &sigma * &q * 2.0;
    Ok(GroundedSystem {
        q,
        l_tilde,
        sigma,
        x,
    })
}

/// Matrix of generalized effective resistance distances.
pub fn grd_values(graph: &DiGraph, method: LyapunovMethod) -> Result<DMatrix<f64>> {
    let system = grounded_system(graph, method)?;
    let res = system.lyapunov_residual();
    if !(res <= 1e-8) {
        return Err(Error::Numerical(format!(
            "Lyapunov residual {res:e} exceeds 1e-8"
        )));
    }
    Ok(system.distances())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::grounding::householder_grounding_matrix;

    fn g(rows: &[(&str, &str, f64)]) -> DiGraph {
        DiGraph::from_edge_list(rows).unwrap()
    }

    #[test]
    fn two_node_resistance_is_one() {
        let d = grd_values(&g(&[("a", "b", 1.0), ("b", "a", 1.0)]), LyapunovMethod::Schur).unwrap();
        assert!((d[(0, 1)] - 1.0).abs() < 1e-12);
        assert_eq!(d[(0, 0)], 0.0);
    }

    #[test]
    fn path_needs_no_regularization() {
        // c is globally reachable, so the solution is unique
        let sys = grounded_system(&g(&[("a", "b", 1.0), ("b", "c", 1.0)]), LyapunovMethod::Schur).unwrap();
        assert!(sys.lyapunov_residual() < 1e-12);
    }

    #[test]
    fn disconnected_rejected() {
        let two = g(&[("a", "b", 1.0), ("b", "a", 1.0), ("c", "d", 1.0), ("d", "c", 1.0)]);
        assert!(matches!(
            grd_values(&two, LyapunovMethod::Schur),
            Err(Error::NoGloballyReachableNode)
        ));
    }

    #[test]
    fn x_is_symmetric_psd() {
        let graph = g(&[("a", "b", 1.0), ("b", "c", 2.0), ("c", "a", 0.5), ("a", "c", 1.0)]);
        let sys = grounded_system(&graph, LyapunovMethod::Schur).unwrap();
        assert!((&sys.x - sys.x.transpose()).amax() < 1e-9);
        let eig = sys.x.clone().symmetric_eigen();
        assert!(eig.eigenvalues.iter().all(|l| *l > -1e-9));
    }

    #[test]
    fn grounding_choice_irrelevant() {
        let graph = g(&[("a", "b", 1.0), ("b", "c", 2.0), ("c", "d", 0.5), ("d", "a", 1.0), ("b", "d", 3.0)]);
        let a = grounded_system(&graph, LyapunovMethod::Schur).unwrap().distances();
        let b = grounded_system_with(&graph, householder_grounding_matrix(4).unwrap(), LyapunovMethod::Schur)
            .unwrap()
            .distances();
        assert!((a - b).amax() < 1e-9);
    }
}
