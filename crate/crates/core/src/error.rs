use std::path::PathBuf;

use thiserror::Error;

/// Every failure the laboratory can report.
///
/// Variants map onto the CLI exit-code classes: argument and domain problems
/// are caller errors, `Io` is an environment failure, and `Convergence` /
/// `InsufficientData` describe numerical or data limits.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside the admissible range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("s = 1 is the pole of zeta")]
    Pole,

    #[error("sieve up to {limit} needs {bytes} bytes, over the {budget}-byte budget")]
    Resource { limit: u64, bytes: u64, budget: u64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: ordinate {next} does not exceed the previous ordinate {prev}")]
    NotAscending { line: usize, prev: f64, next: f64 },

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
