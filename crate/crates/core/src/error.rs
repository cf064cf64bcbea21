use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,

    #[error("row {row}: negative weight {weight}")]
    NegativeWeight { row: usize, weight: f64 },

    #[error("row {row}: {reason}")]
    BadRow { row: usize, reason: String },

    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown node label `{0}`")]
    UnknownLabel(String),

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("graph has {0} nodes, at least 2 are required")]
    TooFewNodes(usize),

    #[error("no globally reachable node; regularize the graph first (apply --alpha)")]
    NoGloballyReachableNode,

    #[error("node `{0}` has zero out-degree; regularize the graph first (apply --alpha)")]
    DanglingNode(String),

    #[error("transition matrix is reducible; regularize the graph first (apply --alpha)")]
    Reducible,

    #[error("singular linear system in {context}")]
    Singular { context: String },

    #[error("Lyapunov equation has no unique solution: eigenvalues {lambda_i} and {lambda_j} pair to {sum:e}")]
    LyapunovSingular {
        lambda_i: String,
        lambda_j: String,
        sum: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("marginal masses differ: {source_mass} vs {target_mass}")]
    MassMismatch { source_mass: f64, target_mass: f64 },

    #[error("graph `{id}`: {source}")]
    Graph {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("pair (`{first}`, `{second}`): {source}")]
    Pair {
        first: String,
        second: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn singular(context: impl Into<String>) -> Self {
        Error::Singular {
            context: context.into(),
        }
    }

    /// True for failures that come from the numerics rather than from the
    /// caller's input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Singular { .. }
            | Error::LyapunovSingular { .. }
            | Error::Numerical(_) => true,
            Error::Graph { source, .. } | Error::Pair { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    /// Process exit code: 1 for numerical failures, 2 for usage or input errors.
    pub fn exit_code(&self) -> i32 {
        if self.is_numerical() {
            1
        } else {
            2
        }
    }
}
