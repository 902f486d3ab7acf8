use thiserror::Error;

/// Failures surfaced by the evaluators and verifiers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The function has a pole at the requested argument.
    #[error("pole at {location}")]
    Pole { location: String },

    /// A configured size bound would be exceeded.
    #[error("{what}: requested {requested} exceeds bound {bound}")]
    Capacity {
        what: &'static str,
        requested: u64,
        bound: u64,
    },

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Argument violates a documented precondition of the operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The closed form has an individually singular term here whose singularity
    /// cancels in the sum; use the circle-average route instead.
    #[error("removable singularity near s = {nearest}; use the circle-average evaluator")]
    RemovableSingularity { nearest: i64 },

    /// The tail of an infinite quadrature sum could not be certified.
    #[error("tail estimate {estimate:e} exceeds tolerance {tol:e}; increase the number of periods")]
    TailNotMet { estimate: f64, tol: f64 },

    /// The series is not known to converge at the requested point.
    #[error("divergent series: {0}")]
    Divergent(String),

    /// Malformed user input (tables, grids, numbers).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
