//! Seeded experiment execution: JSON configs, parallel run cells, CSV
//! records, summary reports, time-series curves and Borda audits.

mod config;
mod curves;
mod oracle;
mod record;
mod report;
mod runner;

pub use config::{
    AlgorithmConfig, AlgorithmSpec, EnvSpec, EnvironmentConfig, ExperimentConfig, Grid, Plan, DEFAULT_Q, DEFAULT_RL,
    DEFAULT_Z_CRITICAL,
};
pub use curves::{curves, CurvePoint};
pub use oracle::{audit, OracleRow};
pub use record::{
    apply_filters, load_records, read_records, save_records, write_records, Filter, RunRecord, FILTER_KEYS,
};
pub use report::{fractional_ranks, summarize, AlgorithmRank, GroupSummary, Report};
pub use runner::{
    build_policy, cells, derive_seed, mix64, play_episode, run_bandit, run_cell, run_experiment, Cell, Move,
};

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("no records to process")]
    EmptyInput,
    #[error("{0}")]
    Runtime(String),
}

impl HarnessError {
    pub fn config(key: impl Into<String>, reason: impl ToString) -> Self {
        Self::Config { key: key.into(), reason: reason.to_string() }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), reason: err.to_string() }
    }

    /// Process exit code: 2 for configuration problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(err: std::io::Error) -> Self {
        Self::Io { path: "<stream>".into(), reason: err.to_string() }
    }
}

/// Writes the summary and rank tables of `records` next to each other in
/// `dir`, returning the report.
pub fn write_report(dir: &Path, records: &[RunRecord]) -> Result<Report, HarnessError> {
    let report = summarize(records)?;
    let create = |name: &str| {
        let path = dir.join(name);
        std::fs::File::create(&path).map_err(|e| HarnessError::io(&path, e))
    };
    report.write_groups(create("summary.csv")?)?;
    report.write_ranks(create("ranks.csv")?)?;
    Ok(report)
}

pub fn write_curves<W: std::io::Write>(writer: W, records: &[RunRecord]) -> Result<(), HarnessError> {
    report::write_rows(writer, &curves(records))
}

pub fn write_audit<W: std::io::Write>(writer: W, records: &[RunRecord]) -> Result<(), HarnessError> {
    report::write_rows(writer, &audit(records)?)
}
