use thiserror::Error;

/// Errors raised by the operators, constructors and parsers in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A query point lies outside the set where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// An argument violates a precondition (ordering, positivity, ranges).
    #[error("invalid argument: {0}")]
    Argument(String),
    /// The input is valid but outside the class the operation supports.
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// A function, domain or region failed its construction invariants.
    #[error("construction error: {0}")]
    Construction(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
