//! Graph ensembles and the two graph-to-graph transport distances.
//!
//! The Wasserstein route treats every graph as a distribution of edge weight
//! over a shared edge universe. Ground costs between edges come from a node
//! metric evaluated on the directed line graph of the whole ensemble, whose
//! node `(a, b)` links to `(b, c)` with weight equal to the fraction of graphs
//! containing both edges. It needs a shared node-label vocabulary.
//!
//! The Gromov-Wasserstein route compares the node-metric geometry of each
//! graph directly, with uniform node masses, and never aligns labels.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DiGraph;
use crate::metrics::{DistanceMatrix, MetricOptions, NodeMetric};
use crate::ot::{emd, gromov_wasserstein, GwOptions, Marginal, TransportPlan};

/// Ordered union of the positive-weight edges of an ensemble, sorted
/// lexicographically by `(source, target)` label.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeUniverse {
    edges: Vec<(String, String)>,
    index: HashMap<(String, String), usize>,
}

impl EdgeUniverse {
    pub fn from_graphs(graphs: &[DiGraph]) -> Self {
        let set: BTreeSet<(String, String)> = graphs
            .iter()
            .flat_map(|g| {
                g.edges()
                    .map(|(i, j, _)| (g.labels()[i].clone(), g.labels()[j].clone()))
            })
            .collect();
        let edges: Vec<_> = set.into_iter().collect();
        let index = edges.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Self { edges, index }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    pub fn index_of(&self, source: &str, target: &str) -> Option<usize> {
        self.index.get(&(source.to_string(), target.to_string())).copied()
    }

    /// `source->target` strings, used as line-graph node labels.
    pub fn labels(&self) -> Vec<String> {
        self.edges.iter().map(|(s, t)| format!("{s}->{t}")).collect()
    }
}

/// The `E x p` matrix of per-graph edge weights over the universe.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeightMatrix {
    values: DMatrix<f64>,
}

impl EdgeWeightMatrix {
    pub fn build(universe: &EdgeUniverse, graphs: &[DiGraph]) -> Self {
        let mut values = DMatrix::zeros(universe.len(), graphs.len());
        for (k, g) in graphs.iter().enumerate() {
            for (i, j, w) in g.edges() {
                let e = universe
                    .index_of(&g.labels()[i], &g.labels()[j])
                    .expect("universe contains every edge");
                values[(e, k)] = w;
            }
        }
        Self { values }
    }

    pub fn from_matrix(values: DMatrix<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("edge weights", "entries must be finite and nonnegative"));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn n_edges(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_graphs(&self) -> usize {
        self.values.ncols()
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.values.column(k).iter().copied().collect()
    }

    /// Column `k` rescaled to a probability vector.
    pub fn marginal(&self, k: usize) -> Result<Marginal> {
        Marginal::normalized(&self.column(k)).map_err(|_| {
            Error::invalid("edge weights", format!("column {k} has zero total weight"))
        })
    }
}

/// Directed line graph over an edge universe.
#[derive(Debug, Clone, PartialEq)]
pub struct LineGraph {
    pub graph: DiGraph,
}

/// Node `u = (a, b)` links to `v = (b, c)` whenever the target of `u` is the
/// source of `v`; the link weight is the fraction of graphs that contain both
/// edges. Edge weights themselves play no role here.
pub fn build_line_graph(universe: &EdgeUniverse, graphs: &[DiGraph]) -> Result<LineGraph> {
    if universe.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let weights = EdgeWeightMatrix::build(universe, graphs);
    line_graph_from_weights(universe, &weights)
}

fn line_graph_from_weights(universe: &EdgeUniverse, weights: &EdgeWeightMatrix) -> Result<LineGraph> {
    let e = universe.len();
    let p = weights.n_graphs();
    let mut by_source: HashMap<&str, Vec<usize>> = HashMap::new();
    for (idx, (s, _)) in universe.edges().iter().enumerate() {
        by_source.entry(s.as_str()).or_default().push(idx);
    }
    let present = weights.values().map(|w| w > 0.0);
    let mut adj = DMatrix::zeros(e, e);
    for (u, (_, target)) in universe.edges().iter().enumerate() {
        let Some(next) = by_source.get(target.as_str()) else {
            continue;
        };
        for &v in next {
            let both = (0..p).filter(|&k| present[(u, k)] && present[(v, k)]).count();
            adj[(u, v)] = both as f64 / p as f64;
        }
    }
    Ok(LineGraph {
        graph: DiGraph::new(universe.labels(), adj)?,
    })
}

/// A cohort of graphs with its edge universe and weight matrix.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub ids: Vec<String>,
    pub graphs: Vec<DiGraph>,
    pub universe: EdgeUniverse,
    pub weights: EdgeWeightMatrix,
    pub warnings: Vec<String>,
}

impl Ensemble {
    pub fn new(ids: Vec<String>, graphs: Vec<DiGraph>) -> Result<Self> {
        if graphs.len() < 2 {
            return Err(Error::invalid("ensemble", format!("{} graphs, at least 2 required", graphs.len())));
        }
        if ids.len() != graphs.len() {
            return Err(Error::Dimension(format!("{} ids for {} graphs", ids.len(), graphs.len())));
        }
        for (id, g) in ids.iter().zip(&graphs) {
            if g.edge_count() == 0 {
                return Err(Error::Graph {
                    id: id.clone(),
                    source: Box::new(Error::EmptyGraph),
                });
            }
        }
        let mut warnings = Vec::new();
        let label_sets: Vec<BTreeSet<&str>> = graphs
            .iter()
            .map(|g| g.labels().iter().map(String::as_str).collect())
            .collect();
        'outer: for k in 0..graphs.len() {
            for l in k + 1..graphs.len() {
                if label_sets[k].is_disjoint(&label_sets[l]) {
                    let w = format!(
                        "graphs `{}` and `{}` share no node labels; Wasserstein distances between them are not meaningful",
                        ids[k], ids[l]
                    );
                    log::warn!("{w}");
                    warnings.push(w);
                    break 'outer;
                }
            }
        }
        let universe = EdgeUniverse::from_graphs(&graphs);
        let weights = EdgeWeightMatrix::build(&universe, &graphs);
        Ok(Self {
            ids,
            graphs,
            universe,
            weights,
            warnings,
        })
    }

    /// Ensemble with ids `g0, g1, ...`.
    pub fn from_graphs(graphs: Vec<DiGraph>) -> Result<Self> {
        let ids = (0..graphs.len()).map(|k| format!("g{k}")).collect();
        Self::new(ids, graphs)
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn line_graph(&self) -> Result<LineGraph> {
        line_graph_from_weights(&self.universe, &self.weights)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OtMethod {
    Wasserstein,
    #[serde(rename = "gw")]
    GromovWasserstein,
}

impl fmt::Display for OtMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OtMethod::Wasserstein => f.write_str("Wasserstein"),
            OtMethod::GromovWasserstein => f.write_str("GW"),
        }
    }
}

/// Earth mover's distances between the edge-weight columns of an ensemble.
#[derive(Debug, Clone)]
pub struct WassersteinModel {
    pub cost: DMatrix<f64>,
    pub marginals: Vec<Marginal>,
    /// The line-graph metric when the cost came from one.
    pub line_metric: Option<DistanceMatrix>,
}

impl WassersteinModel {
    /// Ground cost = `metric` on the ensemble's line graph (regularized per
    /// `opts` when it fails the metric's precondition).
    pub fn new(ensemble: &Ensemble, metric: NodeMetric, opts: &MetricOptions) -> Result<Self> {
        let line = ensemble.line_graph()?;
        let dist = metric.compute(&line.graph, opts)?;
        let mut model = Self::with_cost(ensemble, dist.values.clone())?;
        model.line_metric = Some(dist);
        Ok(model)
    }

    /// Uses an arbitrary `E x E` ground cost over the edge universe.
    pub fn with_cost(ensemble: &Ensemble, cost: DMatrix<f64>) -> Result<Self> {
        let e = ensemble.universe.len();
        if cost.shape() != (e, e) {
            return Err(Error::Dimension(format!("cost {:?} for {e} edges", cost.shape())));
        }
        let marginals = (0..ensemble.len())
            .map(|k| {
                ensemble.weights.marginal(k).map_err(|err| Error::Graph {
                    id: ensemble.ids[k].clone(),
                    source: Box::new(err),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            cost,
            marginals,
            line_metric: None,
        })
    }

    pub fn distance(&self, k: usize, l: usize) -> Result<(f64, TransportPlan)> {
        let (mu, nu) = (self.marginal(k)?, self.marginal(l)?);
        let plan = emd(mu, nu, &self.cost)?;
        Ok((plan.objective, plan))
    }

    fn marginal(&self, k: usize) -> Result<&Marginal> {
        self.marginals
            .get(k)
            .ok_or_else(|| Error::invalid("graph index", format!("{k} out of range")))
    }
}

/// Gromov-Wasserstein distances between per-graph node metrics.
#[derive(Debug, Clone)]
pub struct GwModel {
    pub metrics: Vec<DistanceMatrix>,
    pub opts: GwOptions,
}

/// One Gromov-Wasserstein comparison.
#[derive(Debug, Clone)]
pub struct GwPair {
    pub distance: f64,
    pub plan: TransportPlan,
    pub converged: bool,
}

impl GwModel {
    pub fn new(
        ids: &[String],
        graphs: &[DiGraph],
        metric: NodeMetric,
        metric_opts: &MetricOptions,
        opts: GwOptions,
    ) -> Result<Self> {
        let metrics = graphs
            .par_iter()
            .zip(ids.par_iter())
            .map(|(g, id)| {
                metric.compute(g, metric_opts).map_err(|e| Error::Graph {
                    id: id.clone(),
                    source: Box::new(e),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { metrics, opts })
    }

    pub fn from_ensemble(
        ensemble: &Ensemble,
        metric: NodeMetric,
        metric_opts: &MetricOptions,
        opts: GwOptions,
    ) -> Result<Self> {
        Self::new(&ensemble.ids, &ensemble.graphs, metric, metric_opts, opts)
    }

    /// Solver seed for the ordered pair `(k, l)`; independent of schedule.
    fn pair_seed(&self, k: usize, l: usize) -> u64 {
        let mix = (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (l as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
        self.opts.seed ^ mix
    }

    pub fn distance(&self, k: usize, l: usize) -> Result<GwPair> {
        let get = |i: usize| {
            self.metrics
                .get(i)
                .ok_or_else(|| Error::invalid("graph index", format!("{i} out of range")))
        };
        let (a, b) = (get(k)?, get(l)?);
        let opts = GwOptions {
            seed: self.pair_seed(k, l),
            ..self.opts
        };
        let sol = gromov_wasserstein(
            &a.values,
            &b.values,
            &Marginal::uniform(a.n()),
            &Marginal::uniform(b.n()),
            &opts,
        )?;
        Ok(GwPair {
            distance: sol.plan.objective,
            converged: sol.converged,
            plan: sol.plan,
        })
    }
}

/// Single-pair Wasserstein distance; builds the line-graph cost from scratch.
pub fn wasserstein_distance(
    ensemble: &Ensemble,
    k: usize,
    l: usize,
    metric: NodeMetric,
    opts: &MetricOptions,
) -> Result<(f64, TransportPlan)> {
    WassersteinModel::new(ensemble, metric, opts)?.distance(k, l)
}

/// Single-pair Gromov-Wasserstein distance.
pub fn gw_distance(
    g1: &DiGraph,
    g2: &DiGraph,
    metric: NodeMetric,
    metric_opts: &MetricOptions,
    opts: &GwOptions,
) -> Result<(f64, TransportPlan)> {
    let a = metric.compute(g1, metric_opts)?;
    let b = metric.compute(g2, metric_opts)?;
    let sol = gromov_wasserstein(
        &a.values,
        &b.values,
        &Marginal::uniform(a.n()),
        &Marginal::uniform(b.n()),
        opts,
    )?;
    Ok((sol.plan.objective, sol.plan))
}

/// Parameters shared by all pairwise computations.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PairwiseParams {
    pub metric_opts: MetricOptions,
    pub gw: GwOptions,
}

/// Provenance and diagnostics written next to a pairwise distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseMeta {
    pub method: OtMethod,
    pub metric: NodeMetric,
    pub params: PairwiseParams,
    /// Ids of graphs (GW) or `"line_graph"` (Wasserstein) that were
    /// regularized, with the alpha used.
    pub regularized: Vec<(String, f64)>,
    /// Largest `|d(k, l) - d(l, k)|` over both solve directions.
    pub max_asymmetry: f64,
    pub non_converged_pairs: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PairwiseResult {
    pub ids: Vec<String>,
    pub values: DMatrix<f64>,
    pub meta: PairwiseMeta,
}

/// All graph-to-graph distances of an ensemble.
///
/// Both directions of every pair are solved. Wasserstein entries keep the
/// directional values; Gromov-Wasserstein entries take the smaller of the
/// two local optima (both bound the same quantity), so that matrix is
/// symmetric. The gap between directions is reported as `max_asymmetry`.
pub fn pairwise_distances(
    method: OtMethod,
    metric: NodeMetric,
    ensemble: &Ensemble,
    params: &PairwiseParams,
) -> Result<PairwiseResult> {
    let p = ensemble.len();
    let pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|k| (k + 1..p).map(move |l| (k, l)))
        .collect();
    let mut values = DMatrix::zeros(p, p);
    let mut regularized = Vec::new();
    let mut non_converged = Vec::new();
    let mut max_asymmetry: f64 = 0.0;
    let mut warnings = ensemble.warnings.clone();
    let wrap = |k: usize, l: usize| {
        let (first, second) = (ensemble.ids[k].clone(), ensemble.ids[l].clone());
        move |e: Error| Error::Pair {
            first,
            second,
            source: Box::new(e),
        }
    };
    match method {
        OtMethod::Wasserstein => {
            let model = WassersteinModel::new(ensemble, metric, &params.metric_opts)?;
            if let Some(alpha) = model.line_metric.as_ref().and_then(|m| m.alpha) {
                regularized.push(("line_graph".to_string(), alpha));
            }
            if let Some(m) = &model.line_metric {
                warnings.extend(m.diagnostics.warnings.iter().cloned());
            }
            let results: Vec<(f64, f64)> = pairs
                .par_iter()
                .map(|&(k, l)| {
                    let a = model.distance(k, l).map_err(wrap(k, l))?.0;
                    let b = model.distance(l, k).map_err(wrap(l, k))?.0;
                    Ok((a, b))
                })
                .collect::<Result<_>>()?;
            for (&(k, l), (a, b)) in pairs.iter().zip(results) {
                values[(k, l)] = a;
                values[(l, k)] = b;
                max_asymmetry = max_asymmetry.max((a - b).abs());
            }
        }
        OtMethod::GromovWasserstein => {
            let model = GwModel::from_ensemble(ensemble, metric, &params.metric_opts, params.gw)?;
            for (id, m) in ensemble.ids.iter().zip(&model.metrics) {
                if let Some(alpha) = m.alpha {
                    regularized.push((id.clone(), alpha));
                }
            }
            if let Some(w) = model.metrics.iter().flat_map(|m| m.diagnostics.warnings.iter()).next() {
                warnings.push(w.clone());
            }
            let results: Vec<(GwPair, GwPair)> = pairs
                .par_iter()
                .map(|&(k, l)| Ok((model.distance(k, l).map_err(wrap(k, l))?, model.distance(l, k).map_err(wrap(l, k))?)))
                .collect::<Result<_>>()?;
            for (&(k, l), (a, b)) in pairs.iter().zip(results) {
                let d = a.distance.min(b.distance);
                values[(k, l)] = d;
                values[(l, k)] = d;
                max_asymmetry = max_asymmetry.max((a.distance - b.distance).abs());
                if !a.converged || !b.converged {
                    non_converged.push((k, l));
                }
            }
            if max_asymmetry > 1e-6 {
                let w = format!("GW solves in opposite directions differ by up to {max_asymmetry:e}");
                log::warn!("{w}");
                warnings.push(w);
            }
        }
    }
    Ok(PairwiseResult {
        ids: ensemble.ids.clone(),
        values,
        meta: PairwiseMeta {
            method,
            metric,
            params: *params,
            regularized,
            max_asymmetry,
            non_converged_pairs: non_converged,
            warnings,
        },
    })
}
