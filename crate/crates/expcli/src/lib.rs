//! Experiment driver for the two-qubit jump model and its classical
//! telegraph analog: configuration, deterministic parallel pipelines, and
//! CSV/JSON emission.

pub mod config;
pub mod output;
pub mod pipelines;
pub mod points;

use thiserror::Error;
use trajlab::metrics::MetricsError;
use trajlab::qjump::SimError;

/// Driver-level errors; [`CliError::exit_code`] maps them onto the
/// documented process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("numerical guard: {0}")]
    Guard(String),
}

impl CliError {
    pub fn from_sim(e: SimError) -> Self {
        match e {
            SimError::StepGuard(msg) => CliError::Guard(msg),
            other => CliError::Config(other.to_string()),
        }
    }

    pub fn from_metrics(e: MetricsError) -> Self {
        CliError::Config(e.to_string())
    }

    /// 2 for configuration errors, 3 for i/o, 4 for numerical guards.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Guard(_) => 4,
        }
    }
}
