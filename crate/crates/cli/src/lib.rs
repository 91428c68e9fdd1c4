//! Orchestration layer: run configuration, the worker pool over sieve
//! blocks, CSV/JSON report emission, prime-sum checkpoint files, and the
//! acceptance suites driven by `mospec verify`.

pub mod checkpoint;
pub mod config;
pub mod error;
pub mod parallel;
pub mod report;
pub mod runner;
pub mod suites;

pub use config::RunConfig;
pub use error::{CliError, Result};
pub use runner::run_sweep;
