use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument or configuration value violates its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    /// Input data is malformed or non-finite.
    #[error("data error: {0}")]
    Data(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("column {0} has zero squared norm")]
    DegenerateColumn(usize),

    /// A metric whose denominator is empty (no links, or no non-links).
    #[error("metric {0} is undefined for this network")]
    UndefinedMetric(&'static str),

    #[error("block (split {split}, groups {row_group}x{col_group}, node {node}) failed: {source}")]
    Block {
        split: usize,
        row_group: usize,
        col_group: usize,
        node: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{} block task(s) failed; first: {}", .0.len(), .0[0])]
    Split(Vec<Error>),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit code for the command-line front end: 2 for configuration
    /// problems, 3 for data problems, 4 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) => 2,
            Error::Parse { .. }
            | Error::Data(_)
            | Error::DimensionMismatch { .. }
            | Error::UndefinedMetric(_)
            | Error::Io { .. } => 3,
            Error::DegenerateColumn(_) | Error::Block { .. } | Error::Split(_) => 4,
        }
    }
}
