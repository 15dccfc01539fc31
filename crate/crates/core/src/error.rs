use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An index, size or argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Code parameters that violate the (l, r, L) constraints.
    #[error("invalid code parameters: {0}")]
    Parameter(String),

    /// Malformed input text. `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The requested exhaustive computation exceeds the configured limit.
    #[error(
        "matrix has {cols} columns, above the exhaustive limit of {limit}; \
         use the characterization-based path for (l,r,L) base matrices"
    )]
    Capacity { cols: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
