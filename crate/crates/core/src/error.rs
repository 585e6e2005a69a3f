use thiserror::Error;

/// Errors raised by the recovery toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),

    #[error("dimension mismatch: {context} (expected {expected}, got {actual})")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("singular least-squares system on support {support:?}")]
    Singular { support: Vec<usize> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} requires {required} evaluations (limit {limit})")]
    Capacity {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("no root found: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NotFound {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
