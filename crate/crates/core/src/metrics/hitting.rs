//! Hitting-time distance: `-log T` where
//! `T[i][j] = pi_i^beta / pi_j^(1-beta) * P_i[tau_j <= tau_i]` off the
//! diagonal and `T[i][i] = 1`.

use nalgebra::DMatrix;

use super::markov::{ChainStatistics, HittingSolver};
use crate::error::{Error, Result};
use crate::graph::DiGraph;

pub const DEFAULT_BETA: f64 = 1.0;

/// Checks `beta`. Values outside `(0.5, 1]` are allowed but produce a
/// warning; `0.5` itself is the boundary case.
pub fn check_beta(beta: f64) -> Result<Option<String>> {
    if !beta.is_finite() {
        return Err(Error::invalid("beta", format!("{beta} is not finite")));
    }
    Ok(if beta == 0.5 {
        Some("beta = 0.5 is the boundary of the metric range (0.5, 1]".to_string())
    } else if !(beta > 0.5 && beta <= 1.0) {
        Some(format!("beta = {beta} is outside the metric range (0.5, 1]"))
    } else {
        None
    })
}

pub fn chain_statistics(graph: &DiGraph, beta: f64, solver: HittingSolver) -> Result<ChainStatistics> {
    if graph.n() < 2 {
        return Err(Error::TooFewNodes(graph.n()));
    }
    let p = graph.transition_matrix()?;
    ChainStatistics::new(p, beta, solver)
}

/// Hitting-time distances, diagonal exactly zero. Negative entries are kept
/// as computed; callers inspect and report them.
pub fn htd_values(graph: &DiGraph, beta: f64, solver: HittingSolver) -> Result<DMatrix<f64>> {
    check_beta(beta)?;
    let stats = chain_statistics(graph, beta, solver)?;
    let n = graph.n();
    let t = &stats.normalized_hitting;
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                if !(t[(i, j)] > 0.0) {
                    return Err(Error::Numerical(format!(
                        "normalized hitting matrix entry ({i}, {j}) is {}",
                        t[(i, j)]
                    )));
                }
                d[(i, j)] = -t[(i, j)].ln();
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle() -> DiGraph {
        DiGraph::from_edge_list(&[("a", "b", 1.0), ("b", "a", 1.0)]).unwrap()
    }

    #[test]
    fn beta_one_two_state_is_log_two() {
        let d = htd_values(&two_cycle(), 1.0, HittingSolver::Absorbing).unwrap();
        assert!((d[(0, 1)] - 2f64.ln()).abs() < 1e-12);
        assert!((d[(1, 0)] - 2f64.ln()).abs() < 1e-12);
        assert_eq!(d[(0, 0)], 0.0);
    }

    #[test]
    fn beta_half_two_state_degenerates() {
        let d = htd_values(&two_cycle(), 0.5, HittingSolver::Absorbing).unwrap();
        assert!(d[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn beta_warnings() {
        assert!(check_beta(1.0).unwrap().is_none());
        assert!(check_beta(0.75).unwrap().is_none());
        assert!(check_beta(0.5).unwrap().unwrap().contains("boundary"));
        assert!(check_beta(1.5).unwrap().is_some());
        assert!(check_beta(f64::NAN).is_err());
    }

    #[test]
    fn dangling_node_rejected() {
        let path = DiGraph::from_edge_list(&[("a", "b", 1.0)]).unwrap();
        assert!(matches!(
            htd_values(&path, 1.0, HittingSolver::Auto),
            Err(Error::DanglingNode(label)) if label == "b"
        ));
    }

    #[test]
    fn not_strongly_connected_rejected() {
        let g = DiGraph::from_edge_list(&[("a", "b", 1.0), ("b", "b", 1.0)]).unwrap();
        assert!(matches!(htd_values(&g, 1.0, HittingSolver::Auto), Err(Error::Reducible)));
    }
}
