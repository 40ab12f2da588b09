//! Experiment harness, file formats and verification suites for greedy walks
//! on point processes (see `gwlab-core` for the walk itself).

pub mod config;
mod error;
pub mod experiments;
pub mod io;
pub mod stats;
pub mod suites;

pub use config::{ExperimentConfig, SpecArgs, Statistic};
pub use error::{Error, Result};
pub use experiments::{aggregate, coupled_window_study, run_experiment, write_outputs, AggregateReport, RunSummary};
