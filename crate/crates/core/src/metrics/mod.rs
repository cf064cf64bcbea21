//! Directed node-to-node distances.
//!
//! [`NodeMetric::compute`] is the entry point: it checks the reachability
//! precondition of the chosen metric, regularizes the graph when the
//! precondition fails (or when forced), and returns a labeled
//! [`DistanceMatrix`] that records whether regularization was applied.

pub mod grounding;
pub mod hitting;
pub mod lyapunov;
pub mod markov;
pub mod resistance;

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{DiGraph, DEFAULT_ALPHA};
use crate::io;

pub use hitting::DEFAULT_BETA;
pub use lyapunov::LyapunovMethod;
pub use markov::HittingSolver;

/// A directed node-to-node metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeMetric {
    /// Generalized effective resistance.
    Grd,
    /// Hitting-time distance with stationary weighting exponent `beta`.
    Htd { beta: f64 },
}

impl NodeMetric {
    pub fn name(&self) -> String {
        match self {
            NodeMetric::Grd => "GRD".to_string(),
            NodeMetric::Htd { beta } => format!("HTD^{beta}"),
        }
    }

    /// Whether `graph` satisfies the reachability condition this metric
    /// needs: a globally reachable node for GRD, strong connectivity for HTD.
    pub fn precondition_holds(&self, graph: &DiGraph) -> bool {
        let r = graph.reachability();
        match self {
            NodeMetric::Grd => r.has_globally_reachable_node,
            NodeMetric::Htd { .. } => r.strongly_connected && graph.out_degrees().iter().all(|d| *d > 0.0),
        }
    }

    pub fn compute(&self, graph: &DiGraph, opts: &MetricOptions) -> Result<DistanceMatrix> {
        let mut warnings = Vec::new();
        if let NodeMetric::Htd { beta } = self {
            if let Some(w) = hitting::check_beta(*beta)? {
                log::warn!("{w}");
                warnings.push(w);
            }
        }
        let policy = opts.regularization;
        let alpha = (policy.force || !self.precondition_holds(graph)).then_some(policy.alpha);
        let regularized;
        let input = match alpha {
            Some(a) => {
                regularized = graph.regularize(a)?;
                &regularized
            }
            None => graph,
        };
        let mut lyapunov_residual = None;
        let values = match self {
            NodeMetric::Grd => {
                let system = resistance::grounded_system(input, opts.lyapunov)?;
                let res = system.lyapunov_residual();
                if !(res <= 1e-8) {
                    return Err(crate::Error::Numerical(format!(
                        "Lyapunov residual {res:e} exceeds 1e-8"
                    )));
                }
                lyapunov_residual = Some(res);
                system.distances()
            }
            NodeMetric::Htd { beta } => hitting::htd_values(input, *beta, opts.hitting)?,
        };
        let diagnostics = MetricDiagnostics::inspect(&values, lyapunov_residual, warnings);
        if diagnostics.negative_entries > 0 {
            log::warn!(
                "{} has {} negative entries (min {:e})",
                self.name(),
                diagnostics.negative_entries,
                diagnostics.min_entry
            );
        }
        Ok(DistanceMatrix {
            labels: graph.labels().to_vec(),
            values,
            metric: *self,
            alpha,
            diagnostics,
        })
    }
}

/// When and how strongly to apply teleportation regularization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizationPolicy {
    pub alpha: f64,
    /// Regularize even when the metric's precondition already holds.
    pub force: bool,
}

impl Default for RegularizationPolicy {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            force: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricOptions {
    pub regularization: RegularizationPolicy,
    pub lyapunov: LyapunovMethod,
    pub hitting: HittingSolver,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDiagnostics {
    pub negative_entries: usize,
    pub min_entry: f64,
    pub max_asymmetry: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lyapunov_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl MetricDiagnostics {
    fn inspect(values: &DMatrix<f64>, lyapunov_residual: Option<f64>, warnings: Vec<String>) -> Self {
        Self {
            negative_entries: values.iter().filter(|v| **v < 0.0).count(),
            min_entry: values.min(),
            max_asymmetry: (values - values.transpose()).amax(),
            lyapunov_residual,
            warnings,
        }
    }
}

/// Node-to-node distances with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    pub values: DMatrix<f64>,
    pub metric: NodeMetric,
    /// Teleportation weight if the graph was regularized first.
    pub alpha: Option<f64>,
    pub diagnostics: MetricDiagnostics,
}

/// JSON sidecar written next to a distance matrix CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSidecar {
    pub metric_kind: String,
    pub beta: Option<f64>,
    pub alpha: Option<f64>,
    pub diagnostics: MetricDiagnostics,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn sidecar(&self) -> DistanceSidecar {
        let (metric_kind, beta) = match self.metric {
            NodeMetric::Grd => ("grd", None),
            NodeMetric::Htd { beta } => ("htd", Some(beta)),
        };
        DistanceSidecar {
            metric_kind: metric_kind.to_string(),
            beta,
            alpha: self.alpha,
            diagnostics: self.diagnostics.clone(),
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        io::write_labeled_matrix(&self.labels, &self.values, writer)
    }

    /// Writes `<path>` (CSV) and `<path>.json` (sidecar).
    pub fn save(&self, path: &Path) -> Result<()> {
        io::save_labeled_matrix(&self.labels, &self.values, path)?;
        let mut sidecar = path.as_os_str().to_owned();
        sidecar.push(".json");
        io::write_json(&self.sidecar(), Path::new(&sidecar))
    }
}
