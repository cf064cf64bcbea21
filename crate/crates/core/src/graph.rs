//! Dense directed weighted graphs and their connectivity structure.

use std::collections::HashMap;

use nalgebra::DMatrix;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph as PetGraph, NodeIndex};

use crate::error::{Error, Result};

/// Default teleportation weight, the usual PageRank convention.
pub const DEFAULT_ALPHA: f64 = 0.85;

/// A directed graph with nonnegative edge weights stored densely.
///
/// `weights[(i, j)]` is the weight of the edge `i -> j`; zero means the edge
/// is absent. Self-loops are allowed and kept.
#[derive(Debug, Clone, PartialEq)]
pub struct DiGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    weights: DMatrix<f64>,
}

/// Connectivity summary of a digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Reachability {
    pub strongly_connected: bool,
    pub has_globally_reachable_node: bool,
}

impl DiGraph {
    pub fn new(labels: Vec<String>, weights: DMatrix<f64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if weights.nrows() != labels.len() || weights.ncols() != labels.len() {
            return Err(Error::Dimension(format!(
                "{} labels but a {}x{} weight matrix",
                labels.len(),
                weights.nrows(),
                weights.ncols()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::invalid(
                "weights",
                format!("entries must be finite and nonnegative, found {w}"),
            ));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self {
            labels,
            index,
            weights,
        })
    }

    /// Builds a graph from `(source, target, weight)` rows.
    ///
    /// Nodes are numbered in order of first appearance. Repeated
    /// `(source, target)` rows add up. A zero-weight row only declares its
    /// endpoints.
    pub fn from_edge_list<S: AsRef<str>>(rows: &[(S, S, f64)]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut entries = Vec::with_capacity(rows.len());
        for (row, (source, target, weight)) in rows.iter().enumerate() {
            if !weight.is_finite() {
                return Err(Error::BadRow {
                    row,
                    reason: format!("weight {weight} is not finite"),
                });
            }
            if *weight < 0.0 {
                return Err(Error::NegativeWeight {
                    row,
                    weight: *weight,
                });
            }
            let mut intern = |label: &str| -> usize {
                if let Some(&i) = index.get(label) {
                    return i;
                }
                labels.push(label.to_string());
                index.insert(label.to_string(), labels.len() - 1);
                labels.len() - 1
            };
            let s = intern(source.as_ref());
            let t = intern(target.as_ref());
            entries.push((s, t, *weight));
        }
        let n = labels.len();
        let mut weights = DMatrix::zeros(n, n);
        for (s, t, w) in entries {
            weights[(s, t)] += w;
        }
        Ok(Self {
            labels,
            index,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn weight(&self, source: &str, target: &str) -> Result<f64> {
        let s = self.require(source)?;
        let t = self.require(target)?;
        Ok(self.weights[(s, t)])
    }

    pub(crate) fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Positive-weight edges as `(source, target, weight)` index triples, row-major.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| {
            (0..n).filter_map(move |j| {
                let w = self.weights[(i, j)];
                (w > 0.0).then_some((i, j, w))
            })
        })
    }

    pub fn edge_count(&self) -> usize {
        self.weights.iter().filter(|w| **w > 0.0).count()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.sum()
    }

    /// Weighted out-degrees, `A 1`.
    pub fn out_degrees(&self) -> Vec<f64> {
        self.weights.row_iter().map(|r| r.sum()).collect()
    }

    /// `L = D - A` with `D = diag(A 1)`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = -self.weights.clone();
        for (i, d) in self.out_degrees().into_iter().enumerate() {
            l[(i, i)] += d;
        }
        l
    }

    /// Random-walk transition matrix `P = D^-1 A`.
    pub fn transition_matrix(&self) -> Result<DMatrix<f64>> {
        let mut p = self.weights.clone();
        for (i, d) in self.out_degrees().into_iter().enumerate() {
            if d <= 0.0 {
                return Err(Error::DanglingNode(self.labels[i].clone()));
            }
            p.row_mut(i).iter_mut().for_each(|w| *w /= d);
        }
        Ok(p)
    }

    /// `A + A^T`, the undirected view of the graph.
    pub fn symmetrized(&self) -> DMatrix<f64> {
        &self.weights + self.weights.transpose()
    }

    /// Same graph with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.labels.clone(), &self.weights * factor)
    }

    /// Same graph with nodes reordered: node `i` of the result is node
    /// `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::invalid("order", "not a permutation of the node indices"));
        }
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        let weights = DMatrix::from_fn(n, n, |a, b| self.weights[(order[a], order[b])]);
        Self::new(labels, weights)
    }

    /// Same structure with fresh labels, used to hide node identities.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<Self> {
        Self::new(labels, self.weights.clone())
    }

    /// Strongly connected components via Tarjan's algorithm, and whether the
    /// condensation has a single sink component.
    pub fn reachability(&self) -> Reachability {
        let n = self.n();
        let mut pg = PetGraph::<(), ()>::with_capacity(n, self.edge_count());
        let nodes: Vec<NodeIndex> = (0..n).map(|_| pg.add_node(())).collect();
        for (i, j, _) in self.edges() {
            if i != j {
                pg.add_edge(nodes[i], nodes[j], ());
            }
        }
        let components = tarjan_scc(&pg);
        let mut component_of = vec![0usize; n];
        for (c, members) in components.iter().enumerate() {
            for v in members {
                component_of[v.index()] = c;
            }
        }
        let mut has_exit = vec![false; components.len()];
        for (i, j, _) in self.edges() {
            if component_of[i] != component_of[j] {
                has_exit[component_of[i]] = true;
            }
        }
        let sinks = has_exit.iter().filter(|e| !**e).count();
        Reachability {
            strongly_connected: components.len() == 1,
            has_globally_reachable_node: sinks == 1,
        }
    }

    /// Teleportation regularization.
    ///
    /// Rows are normalized to sum one (a row without out-edges becomes
    /// uniform) and then mixed with the uniform matrix:
    /// `W' = alpha * W_rownorm + (1 - alpha) / N`. For `alpha < 1` the result
    /// has complete support and is therefore strongly connected.
    pub fn regularize(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid("alpha", format!("{alpha} is outside (0, 1]")));
        }
        let n = self.n();
        if n < 2 {
            return Err(Error::TooFewNodes(n));
        }
        let uniform = 1.0 / n as f64;
        let mut weights = DMatrix::zeros(n, n);
        for (i, d) in self.out_degrees().into_iter().enumerate() {
            for j in 0..n {
                let normalized = if d > 0.0 {
                    self.weights[(i, j)] / d
                } else {
                    uniform
                };
                weights[(i, j)] = alpha * normalized + (1.0 - alpha) * uniform;
            }
        }
        Self::new(self.labels.clone(), weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn g(rows: &[(&str, &str, f64)]) -> DiGraph {
        DiGraph::from_edge_list(rows).unwrap()
    }

    #[test]
    fn two_cycle() {
        let graph = g(&[("a", "b", 1.0), ("b", "a", 1.0)]);
        assert_eq!(graph.labels(), ["a", "b"]);
        assert_eq!(graph.weights(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn empty_rows_rejected() {
        let rows: [(&str, &str, f64); 0] = [];
        assert!(matches!(DiGraph::from_edge_list(&rows), Err(Error::EmptyGraph)));
    }

    #[test]
    fn duplicate_rows_sum() {
        let graph = g(&[("a", "b", 0.5), ("a", "b", 0.5)]);
        assert_eq!(graph.n(), 2);
        assert_eq!(graph.edge_count(), 1);
        assert_eq!(graph.weight("a", "b").unwrap(), 1.0);
    }

    #[test]
    fn negative_weight_names_row() {
        let err = DiGraph::from_edge_list(&[("a", "b", 1.0), ("b", "c", -2.0)]).unwrap_err();
        assert!(matches!(err, Error::NegativeWeight { row: 1, .. }));
    }

    #[test]
    fn self_loops_preserved() {
        let graph = g(&[("a", "a", 2.0), ("a", "b", 1.0)]);
        assert_eq!(graph.weight("a", "a").unwrap(), 2.0);
        // the loop cancels in the Laplacian
        assert_eq!(graph.laplacian()[(0, 0)], 1.0);
    }

    #[test]
    fn reachability_examples() {
        let cycle = g(&[("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)]);
        assert_eq!(
            cycle.reachability(),
            Reachability { strongly_connected: true, has_globally_reachable_node: true }
        );
        let path = g(&[("a", "b", 1.0), ("b", "c", 1.0)]);
        assert_eq!(
            path.reachability(),
            Reachability { strongly_connected: false, has_globally_reachable_node: true }
        );
        let two = g(&[("a", "b", 1.0), ("b", "a", 1.0), ("c", "d", 1.0), ("d", "c", 1.0)]);
        assert_eq!(
            two.reachability(),
            Reachability { strongly_connected: false, has_globally_reachable_node: false }
        );
    }

    #[test]
    fn zero_weight_edges_do_not_connect() {
        let graph = g(&[("a", "b", 1.0), ("b", "a", 0.0)]);
        assert!(!graph.reachability().strongly_connected);
    }

    #[test]
    fn regularize_path_by_hand() {
        let graph = g(&[("a", "b", 1.0)]);
        let r = graph.regularize(0.85).unwrap();
        assert_abs_diff_eq!(r.weights()[(0, 0)], 0.075, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights()[(0, 1)], 0.925, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights()[(1, 0)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights()[(1, 1)], 0.5, epsilon = 1e-15);
        assert!(r.reachability().strongly_connected);
    }

    #[test]
    fn regularize_alpha_one_row_normalizes() {
        let graph = g(&[("a", "b", 2.0), ("b", "a", 4.0), ("b", "c", 4.0), ("c", "a", 1.0)]);
        let r = graph.regularize(1.0).unwrap();
        assert_eq!(r.weights()[(1, 0)], 0.5);
        assert_eq!(r.weights()[(0, 1)], 1.0);
        assert_eq!(r.weights()[(0, 2)], 0.0);
        assert_eq!(r.reachability(), graph.reachability());
    }

    #[test]
    fn regularize_rejects_bad_alpha() {
        let graph = g(&[("a", "b", 1.0)]);
        for alpha in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(graph.regularize(alpha).is_err());
        }
    }

    #[test]
    fn permuted_moves_weights() {
        let graph = g(&[("a", "b", 1.0), ("b", "c", 3.0)]);
        let p = graph.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.labels(), ["c", "a", "b"]);
        assert_eq!(p.weight("b", "c").unwrap(), 3.0);
        assert!(graph.permuted(&[0, 0, 1]).is_err());
    }
}
