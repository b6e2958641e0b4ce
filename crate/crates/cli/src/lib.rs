//! Experiment harness and file formats for the Schur-multiplier toolkit:
//! triangle-projection growth, kernel-discretization growth, inclusion
//! checks, the open-problem probe, and reproducible JSON/CSV reports.

pub mod experiments;
pub mod io;
pub mod report;

/// Errors from the harness: everything the estimators can raise plus file
/// and format problems.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] schur_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
