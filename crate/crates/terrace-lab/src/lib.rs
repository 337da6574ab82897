//! Scenario runner and command-line harness for `terrace-core`.
//!
//! A [`Scenario`] names parameters, seeds, numerics and a list of analyses. [`run::simulate`]
//! integrates it and evaluates every analysis into a [`RunSummary`]; the other commands
//! ([`commands`], [`sweep`]) wrap the speed calculus, the wave solver and barrier certification.

pub mod commands;
pub mod output;
pub mod run;
pub mod scenario;
pub mod summary;
pub mod sweep;

pub use scenario::{Analysis, Scenario, SCHEMA_VERSION};
pub use summary::{CriterionOutcome, RunSummary};

use terrace_core::barriers::BarrierError;
use terrace_core::fronts::FrontError;
use terrace_core::seeds::SeedError;
use terrace_core::solver::SolverError;
use terrace_core::speeds::SpeedError;
use terrace_core::waves::WaveError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Speed(#[from] SpeedError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Front(#[from] FrontError),
    #[error(transparent)]
    Wave(#[from] WaveError),
    #[error(transparent)]
    Barrier(#[from] BarrierError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl LabError {
    /// Process exit status: 2 for a trichotomy boundary case, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Speed(SpeedError::BoundaryCase(_)) => 2,
            _ => 1,
        }
    }
}
