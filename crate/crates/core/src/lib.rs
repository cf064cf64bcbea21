//! Optimal-transport distances between directed weighted graphs.
//!
//! Two directed node-to-node metrics are provided in [`metrics`]: the
//! generalized effective resistance (GRD), obtained from a Lyapunov equation
//! on the grounded Laplacian, and the Markov-chain hitting-time distance
//! (HTD). Either one can be plugged into two transport formulations in
//! [`ensemble`]:
//!
//! - a Gromov-Wasserstein distance that matches the node geometries of two
//!   graphs without any shared labels, and
//! - a Wasserstein (earth mover) distance between edge-weight distributions
//!   supported on the directed line graph of an ensemble.
//!
//! The exact transport and Gromov-Wasserstein solvers live in [`ot`];
//! clustering, the adjusted Rand index and the undirected baselines live in
//! [`eval`]; synthetic generators (cycle of cycles, directed stochastic
//! block models) live in [`synth`].
//!
//! Runnable walkthroughs for every capability are in the `examples/`
//! directory of this crate, e.g. `cargo run --example figure1_flips`.

pub mod cli;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod ot;
pub mod synth;

pub use ensemble::{Ensemble, EdgeUniverse, EdgeWeightMatrix, LineGraph, OtMethod};
pub use error::{Error, Result};
pub use graph::{DiGraph, Reachability};
pub use metrics::{DistanceMatrix, NodeMetric, RegularizationPolicy};
pub use ot::{GwOptions, Marginal, TransportPlan};
