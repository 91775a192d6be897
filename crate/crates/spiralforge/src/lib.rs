//! Configuration, file formats and orchestration around `spiralforge-core`.

// negated float comparisons are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod export;
pub mod report;
pub mod run;

use std::path::Path;

/// Failure classes of a run, each with its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("rejected parameters: {0}")]
    Rejected(String),
    #[error("did not converge: {0}")]
    NotConverged(String),
    #[error("numerical failure: {0}")]
    Numerical(spiralforge_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl RunError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        RunError::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Rejected(_) => 2,
            RunError::NotConverged(_) | RunError::Numerical(_) => 3,
            RunError::Io { .. } => 4,
        }
    }
}

impl From<spiralforge_core::Error> for RunError {
    fn from(e: spiralforge_core::Error) -> Self {
        match e {
            spiralforge_core::Error::RejectedParameters(m) => RunError::Rejected(m),
            other => RunError::Numerical(other),
        }
    }
}
