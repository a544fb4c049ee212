//! Opinion dynamics with backfire effect and biased assimilation (BEBA),
//! with DeGroot and biased-opinion-formation (BOF) baselines.
//!
//! * [`graph`]: networks, random generators, edge-list I/O
//! * [`models`]: single-step update rules
//! * [`dynamics`]: iteration to a limit and outcome classification
//! * [`analysis`]: threshold searches, sweeps, campaigns, interventions
//! * [`io`]: opinion files and JSON run reports
//! * [`cli`]: the `beba` command line

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod graph;
pub mod io;
pub mod models;

pub use dynamics::{run, run_outcome, Model, Outcome, OutcomeKind, RunConfig, Trajectory};
pub use graph::Graph;
pub use models::{BebaParams, BofParams, FixedEnvironment, OpinionVector, Scale};
