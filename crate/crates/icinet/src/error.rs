use std::io;

/// Crate-wide error type.
///
/// The split matters to callers: `Config` and `Data` indicate bad inputs or
/// inconsistent files (a user problem), while `Internal` flags a broken
/// invariant inside the sampler or its caches (a bug in this crate). The CLI
/// maps the former to exit code 3 and the latter to exit code 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration value is malformed or impossible to satisfy.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An input file or dataset is internally inconsistent or does not match
    /// the network it claims to describe.
    #[error("inconsistent data: {0}")]
    Data(String),

    /// An internal invariant was violated; this is a bug, not a user error.
    #[error("internal invariant breach: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
