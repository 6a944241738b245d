use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// How a command finished, as a process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Invalid seed, infeasible target, failed physical check.
    DomainFailure,
    /// Output written, but some optimizer target was not reached.
    ConvergenceWarning,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Self::Success => 0,
            Self::DomainFailure => 1,
            Self::ConvergenceWarning => 3,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("write failed: {0}")]
    Output(#[from] io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(#[from] antispin_core::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            Self::Domain(_) => 1,
            Self::Io { .. } | Self::Output(_) | Self::Parse(_) => 2,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Self::Output(io),
            other => Self::Parse(format!("{other:?}")),
        }
    }
}
