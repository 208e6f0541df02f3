//! Crate-wide error type, grouped by the exit-code classes the CLI reports.

use std::path::PathBuf;

/// Everything that can go wrong while building artifacts or answering queries.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad user input: malformed flags, invalid queries, out-of-range config.
    #[error("invalid input: {0}")]
    Validation(String),

    /// A data file is missing, corrupt, truncated, or incompatible.
    #[error("artifact error: {0}")]
    Artifact(String),

    /// I/O failure while reading or writing an artifact.
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A bug or unrecoverable internal condition.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn artifact(msg: impl Into<String>) -> Self {
        Error::Artifact(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error class: 2 validation, 3 artifact, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) => 2,
            Error::Artifact(_) | Error::Io { .. } => 3,
            Error::Internal(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
