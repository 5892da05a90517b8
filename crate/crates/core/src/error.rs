use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a formula (negative distance, zero clusters, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value is invalid; `key` names the offending field.
    #[error("invalid config `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("empty trace")]
    EmptyTrace,

    #[error("runs are not comparable: {0}")]
    Mismatch(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("scenario file {path}: {reason}")]
    Scenario { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
