use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An index or argument lies outside the domain of a scale or expression.
    #[error("domain error: {0}")]
    Domain(String),

    /// A logarithmic weight is undefined because `ln a_m(n)` vanishes.
    #[error("singular weight: {0}")]
    Singularity(String),

    /// Evaluation of an expression, jet or quadrature failed.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// The request exceeds what the implementation supports (jet order, derivative of a table).
    #[error("capability error: {0}")]
    Capability(String),

    /// Incompatible carriers were combined.
    #[error("type error: {0}")]
    Type(String),

    /// The expression text could not be parsed. `offset` is a byte offset into the source.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, len: usize, message: String },

    /// A finite member list fails the Cauchy condition at level `mu`.
    #[error("not Cauchy at level {mu}: members {k} and {l} are too far apart")]
    NotCauchy { mu: u32, k: usize, l: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
