//! Synthetic directed graphs: a ring of directed cycles with single-edge
//! flips, and directed stochastic block model ensembles.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DiGraph;

pub fn cycle_node(cycle: usize, node: usize) -> String {
    format!("c{cycle}_n{node}")
}

/// `n_cycles` directed cycles of `cycle_len` unit edges each. Node 0 of
/// cycle `c` has an extra edge to node 0 of cycle `c + 1` (mod `n_cycles`),
/// so the whole graph is strongly connected.
///
/// Nodes are labelled `c{cycle}_n{index}` and ordered cycle by cycle.
pub fn cycle_of_cycles(n_cycles: usize, cycle_len: usize) -> Result<DiGraph> {
    if n_cycles < 2 {
        return Err(Error::invalid("n_cycles", format!("{n_cycles} < 2")));
    }
    if cycle_len < 2 {
        return Err(Error::invalid("cycle_len", format!("{cycle_len} < 2")));
    }
    let mut rows = Vec::with_capacity(n_cycles * (cycle_len + 1));
    for c in 0..n_cycles {
        for i in 0..cycle_len {
            rows.push((cycle_node(c, i), cycle_node(c, (i + 1) % cycle_len), 1.0));
        }
    }
    for c in 0..n_cycles {
        rows.push((cycle_node(c, 0), cycle_node((c + 1) % n_cycles, 0), 1.0));
    }
    DiGraph::from_edge_list(&rows)
}

/// Moves the weight of `source -> target` onto `target -> source`.
///
/// Fails when the edge is absent or the reverse edge already carries weight.
pub fn flip_edge(graph: &DiGraph, source: &str, target: &str) -> Result<DiGraph> {
    let i = graph.require(source)?;
    let j = graph.require(target)?;
    let w = graph.weights()[(i, j)];
    if w <= 0.0 {
        return Err(Error::invalid("edge", format!("{source} -> {target} does not exist")));
    }
    if graph.weights()[(j, i)] > 0.0 {
        return Err(Error::invalid(
            "edge",
            format!("reverse edge {target} -> {source} is already present"),
        ));
    }
    let mut weights = graph.weights().clone();
    weights[(i, j)] = 0.0;
    weights[(j, i)] = w;
    DiGraph::new(graph.labels().to_vec(), weights)
}

/// A cycle of cycles together with one flipped local edge and one flipped
/// global edge.
#[derive(Debug, Clone)]
pub struct FlipTriple {
    pub original: DiGraph,
    pub local: DiGraph,
    pub global: DiGraph,
    pub local_edge: (String, String),
    pub global_edge: (String, String),
}

impl FlipTriple {
    pub fn ids() -> [&'static str; 3] {
        ["original", "local_flip", "global_flip"]
    }

    pub fn graphs(&self) -> Vec<DiGraph> {
        vec![self.original.clone(), self.local.clone(), self.global.clone()]
    }
}

/// Flips `c0_n0 -> c0_n1` (local) and `c0_n0 -> c1_n0` (global).
pub fn flip_triple(n_cycles: usize, cycle_len: usize) -> Result<FlipTriple> {
    // with fewer than three cycles (or nodes per cycle) the flipped arc's
    // reverse is already present
    if n_cycles < 3 {
        return Err(Error::invalid("n_cycles", format!("{n_cycles}; flips need at least 3 cycles")));
    }
    if cycle_len < 3 {
        return Err(Error::invalid("cycle_len", format!("{cycle_len}; flips need at least 3 nodes per cycle")));
    }
    let original = cycle_of_cycles(n_cycles, cycle_len)?;
    let local_edge = (cycle_node(0, 0), cycle_node(0, 1));
    let global_edge = (cycle_node(0, 0), cycle_node(1, 0));
    let local = flip_edge(&original, &local_edge.0, &local_edge.1)?;
    let global = flip_edge(&original, &global_edge.0, &global_edge.1)?;
    Ok(FlipTriple {
        original,
        local,
        global,
        local_edge,
        global_edge,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightDist {
    Unit,
    Uniform { a: f64, b: f64 },
}

/// Parameters of one directed stochastic block model class.
///
/// Each unordered node pair is linked independently, with probability
/// `p_intra` inside a block and `p_inter` across blocks. A cross-block link
/// points from the lower to the higher block with probability
/// `direction_bias`. A within-block link is reciprocal (one edge each way)
/// unless `intra_reciprocal` is off, in which case it gets a fair coin.
/// Undirected statistics therefore do not depend on `direction_bias`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DsbmSpec {
    pub block_sizes: Vec<usize>,
    pub p_intra: f64,
    pub p_inter: f64,
    pub direction_bias: f64,
    #[serde(default = "unit")]
    pub weight_dist: WeightDist,
    #[serde(default = "yes")]
    pub intra_reciprocal: bool,
    #[serde(default)]
    pub seed: u64,
}

fn unit() -> WeightDist {
    WeightDist::Unit
}

fn yes() -> bool {
    true
}

impl DsbmSpec {
    pub fn validate(&self) -> Result<()> {
        if self.block_sizes.len() < 2 {
            return Err(Error::invalid("block_sizes", "at least 2 blocks are required"));
        }
        if self.block_sizes.contains(&0) {
            return Err(Error::invalid("block_sizes", "block sizes must be positive"));
        }
        for (name, v) in [("p_intra", self.p_intra), ("p_inter", self.p_inter)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(name, format!("{v} is not in [0, 1]")));
            }
        }
        if !(0.5..=1.0).contains(&self.direction_bias) {
            return Err(Error::invalid(
                "direction_bias",
                format!("{} is not in [0.5, 1]", self.direction_bias),
            ));
        }
        if let WeightDist::Uniform { a, b } = self.weight_dist {
            if !(a.is_finite() && b.is_finite() && 0.0 < a && a <= b) {
                return Err(Error::invalid("weight_dist", format!("need 0 < a <= b, got a={a}, b={b}")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Node labels `b{block}_v{index}`, shared by every sample.
    pub fn labels(&self) -> Vec<String> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &size)| (0..size).map(move |i| format!("b{b}_v{i}")))
            .collect()
    }

    fn blocks(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &size)| std::iter::repeat_n(b, size))
            .collect()
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Result<DiGraph> {
        self.validate()?;
        let block = self.blocks();
        let n = block.len();
        let mut w = DMatrix::zeros(n, n);
        for u in 0..n {
            for v in u + 1..n {
                let same = block[u] == block[v];
                let p = if same { self.p_intra } else { self.p_inter };
                if rng.random::<f64>() >= p {
                    continue;
                }
                let reciprocal = same && self.intra_reciprocal;
                let forward = if same {
                    reciprocal || rng.random::<bool>()
                } else {
                    rng.random::<f64>() < self.direction_bias
                };
                let weight = match self.weight_dist {
                    WeightDist::Unit => 1.0,
                    WeightDist::Uniform { a, b } => rng.random_range(a..=b),
                };
                // u < v, so block[u] <= block[v]
                if forward {
                    w[(u, v)] = weight;
                }
                if !forward || reciprocal {
                    w[(v, u)] = weight;
                }
            }
        }
        DiGraph::new(self.labels(), w)
    }
}

/// Draws `count` graphs from each spec. Spec `s` uses a generator seeded
/// with its own `seed` on stream `s`, so equal seeds in different specs do
/// not produce correlated samples. Labels are spec indices.
pub fn dsbm_ensemble(specs: &[(DsbmSpec, usize)]) -> Result<(Vec<DiGraph>, Vec<usize>)> {
    if specs.is_empty() {
        return Err(Error::invalid("specs", "at least one class is required"));
    }
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for (s, (spec, count)) in specs.iter().enumerate() {
        spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(s as u64);
        for _ in 0..*count {
            graphs.push(spec.sample(&mut rng)?);
            labels.push(s);
        }
    }
    Ok((graphs, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_ring() {
        let g = cycle_of_cycles(4, 4).unwrap();
        assert_eq!(g.n(), 16);
        assert_eq!(g.edge_count(), 20);
        let r = g.reachability();
        assert!(r.strongly_connected && r.has_globally_reachable_node);
    }

    #[test]
    fn smallest_ring() {
        let g = cycle_of_cycles(2, 2).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 6));
        assert!(g.reachability().strongly_connected);
        assert!(cycle_of_cycles(1, 4).is_err());
        assert!(cycle_of_cycles(4, 1).is_err());
    }

    #[test]
    fn flips() {
        let g = cycle_of_cycles(4, 4).unwrap();
        let f = flip_edge(&g, "c0_n0", "c0_n1").unwrap();
        assert_eq!(flip_edge(&f, "c0_n1", "c0_n0").unwrap(), g);
        assert_eq!(f.symmetrized(), g.symmetrized());
        assert_eq!(f.total_weight(), g.total_weight());
        assert!(flip_edge(&g, "c0_n1", "c0_n0").is_err());
        assert!(flip_edge(&g, "c0_n0", "zz").is_err());
    }

    #[test]
    fn triple_reachability() {
        let t = flip_triple(4, 4).unwrap();
        // c0_n1 loses its only in-edge, every other node still reaches c0_n0
        let local = t.local.reachability();
        assert!(!local.strongly_connected && local.has_globally_reachable_node);
        let global = t.global.reachability();
        assert!(!global.strongly_connected && global.has_globally_reachable_node);
        assert!(flip_triple(3, 3).is_ok());
        assert!(matches!(flip_triple(2, 4), Err(Error::InvalidParameter { name: "n_cycles", .. })));
        assert!(matches!(flip_triple(4, 2), Err(Error::InvalidParameter { name: "cycle_len", .. })));
    }

    fn spec(bias: f64, seed: u64) -> DsbmSpec {
        DsbmSpec {
            block_sizes: vec![4, 4],
            p_intra: 0.6,
            p_inter: 0.4,
            direction_bias: bias,
            weight_dist: WeightDist::Uniform { a: 0.5, b: 1.5 },
            intra_reciprocal: true,
            seed,
        }
    }

    #[test]
    fn dsbm_deterministic_and_labelled() {
        let specs = [(spec(0.5, 3), 10), (spec(0.95, 3), 10)];
        let (a, la) = dsbm_ensemble(&specs).unwrap();
        let (b, lb) = dsbm_ensemble(&specs).unwrap();
        assert_eq!(a, b);
        assert_eq!(la, lb);
        assert_eq!(a.len(), 20);
        assert_eq!(la.iter().filter(|&&l| l == 1).count(), 10);
        // distinct streams despite equal seeds
        assert_ne!(a[0].symmetrized(), a[10].symmetrized());
        let (_, l) = dsbm_ensemble(&[(spec(0.5, 1), 1), (spec(0.9, 2), 1)]).unwrap();
        assert_eq!(l, vec![0, 1]);
    }

    #[test]
    fn dsbm_full_bias_points_forward() {
        let s = DsbmSpec {
            p_inter: 1.0,
            direction_bias: 1.0,
            ..spec(1.0, 0)
        };
        let g = s.sample(&mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        for u in 0..4 {
            for v in 4..8 {
                assert!(g.weights()[(u, v)] > 0.0 && g.weights()[(v, u)] == 0.0);
            }
        }
    }

    #[test]
    fn dsbm_validation_names_field() {
        let bad = DsbmSpec { direction_bias: 0.3, ..spec(0.5, 0) };
        let msg = bad.validate().unwrap_err().to_string();
        assert!(msg.contains("direction_bias"), "{msg}");
        assert!(DsbmSpec { block_sizes: vec![3], ..spec(0.5, 0) }.validate().is_err());
        assert!(dsbm_ensemble(&[]).is_err());
    }
}
