//! Configuration-driven experiments for the `moaccel` solvers: JSON configs
//! in, per-run CSV traces and a JSON summary out.

pub mod config;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod plot;

pub use config::{ExperimentConfig, OutputConfig, ProblemConfig, SolverEntry, StartsConfig};
pub use error::{BenchError, Result};
pub use experiment::{
    execute, run_experiment, write_outputs, ExperimentResult, RunSettings, Summary, SummaryRow,
};
