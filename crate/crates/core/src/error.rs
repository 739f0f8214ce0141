use thiserror::Error;

/// Errors shared across the crate.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("inconsistent linear system at bidegree ({p}, {q}): {detail}")]
    Inconsistent { p: isize, q: isize, detail: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
