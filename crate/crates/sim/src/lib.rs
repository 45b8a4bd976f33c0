//! Scenario engines, batch runner, reporting and file formats for the
//! avspoof models.
//!
//! A [`config::ScenarioConfig`] selects one of the attack scenarios (or the
//! unattacked baseline); [`run::Runner`] plays independent seeded trials of
//! it, each producing a [`log::TrialLog`]. [`summary`] folds logs into
//! outcome tables, [`cost`] prices disruptions and [`detect`] replays
//! recorded surveillance traffic through the ground-sensor checks.

pub mod config;
pub mod cost;
pub mod detect;
pub mod emit;
pub mod log;
pub mod run;
pub mod scenario;
pub mod summary;

use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Log { path: PathBuf, message: String },
    #[error("trial {trial}: {message}")]
    Trial { trial: u64, message: String },
    #[error(transparent)]
    Crew(#[from] avspoof_core::crew::CrewError),
    #[error(transparent)]
    Stats(#[from] avspoof_core::stats::StatsError),
    #[error("{0}")]
    Summary(String),
}

impl SimError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config { field: field.into(), message: message.into() }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }

    pub(crate) fn trial(trial: u64, err: impl std::fmt::Display) -> Self {
        Self::Trial { trial, message: err.to_string() }
    }

    /// Process exit code for this error: 2 for bad input, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => 2,
            _ => 3,
        }
    }
}

pub use config::{ScenarioConfig, ScenarioKind};
pub use log::{Outcome, TrialLog};
pub use run::{run, Runner};
