use std::path::PathBuf;

use crate::afm::AfmState;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input data violates a documented rule (degenerate segment, out-of-range coordinate, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// An attraction field map was passed in a state the operation does not accept.
    #[error("state error: expected {expected:?} attraction field map, found {found:?}")]
    State { expected: AfmState, found: AfmState },

    /// Invalid tuning parameter.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed binary or text payload.
    #[error("format error: {0}")]
    Format(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the file system rather than by the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
