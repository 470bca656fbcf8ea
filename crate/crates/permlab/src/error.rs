use thiserror::Error;

/// Errors produced by the library and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The request is well formed but exceeds a kernel capacity limit
    /// (permanent order, enumeration size, pair-sum order, ...).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The input is numerically degenerate for the requested operation,
    /// e.g. a matrix whose Gram permanent vanishes cannot be normalized
    /// into a distribution.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// (De)serialization failure for matrices or reports.
    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),

    /// I/O failure while writing CLI output.
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
