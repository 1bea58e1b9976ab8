//! Multi-seed experiment runner: noisy training, clean evaluation, and
//! table-style aggregation of the results.
//!
//! A run trains one agent on a (possibly wrapped) copy of an environment and
//! evaluates it on a separate clean copy. [`run_experiment`] expands an
//! [`ExperimentConfig`] into one baseline run per seed plus one noisy run per
//! seed and noise rate, and [`report`] turns a directory of [`RunRecord`]s into
//! summary and consistency tables.

mod config;
mod record;
mod report;
mod run;
mod summary;
mod sweep;

pub use config::{Component, Coupling, ExperimentConfig, DEFAULT_NOISE_RATES};
pub use record::{canonical_json, fingerprint, RunRecord};
pub use report::{read_records, report, write_records, ReportFiles};
pub use run::{execute_run, plan_runs, run_experiment, run_plan, RunSpec};
pub use summary::{
    consistency_table, pct_improvement, summarize, ConsistencyRow, DegenerateBaseline,
    SummaryMetadata, SummaryRow, SummaryTable, DEFAULT_THRESHOLD,
};
pub use sweep::{sweep, sweep_plan};

use std::path::PathBuf;

use crate::agents::AgentError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config: `{param}`: {message}")]
    Config { param: String, message: String },
    #[error("unknown environment `{0}`")]
    UnknownEnv(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown sweep axis `{axis}` for {kind} (expected one of {expected:?})")]
    UnknownAxis {
        axis: String,
        kind: String,
        expected: Vec<String>,
    },
    #[error("run failed: {0}")]
    Agent(#[from] AgentError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: malformed record: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error("no run records found in {0}")]
    EmptyInput(PathBuf),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl HarnessError {
    pub(crate) fn config(param: impl Into<String>, message: impl Into<String>) -> Self {
        HarnessError::Config {
            param: param.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the configuration rather than by execution.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            HarnessError::Config { .. }
                | HarnessError::UnknownEnv(_)
                | HarnessError::UnknownAgent(_)
                | HarnessError::UnknownAxis { .. }
        )
    }
}

impl From<crate::wrappers::ConfigError> for HarnessError {
    fn from(e: crate::wrappers::ConfigError) -> Self {
        HarnessError::Config {
            param: format!("wrapper.{}", e.param),
            message: e.message,
        }
    }
}

impl From<crate::envs::RegistryError> for HarnessError {
    fn from(e: crate::envs::RegistryError) -> Self {
        match e {
            crate::envs::RegistryError::UnknownEnv(name) => HarnessError::UnknownEnv(name),
            crate::envs::RegistryError::InvalidParams { message, .. } => HarnessError::Config {
                param: "env.params".into(),
                message,
            },
        }
    }
}
