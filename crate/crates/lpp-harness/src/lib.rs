//! Experiment harness for the last-passage percolation toolkit: experiment
//! catalog and configuration, parallel Monte Carlo execution with
//! deterministic aggregation, CSV/JSON persistence, and the CLI surface.

pub mod config;
pub mod describe;
pub mod experiments;
pub mod output;
pub mod runner;

pub use config::{EventKind, Experiment, ExperimentConfig, Grid};
pub use output::{Gate, RunSummary};
pub use runner::run_experiment;
