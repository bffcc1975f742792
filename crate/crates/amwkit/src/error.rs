use thiserror::Error;

/// Crate-wide error type.
///
/// The three mathematical variants mirror the failure modes of the library
/// operations: a point outside a function's domain, an out-of-range
/// construction parameter, and an unmet structural precondition (for example
/// asking for a disjoint-support tail bound on a sequence that carries no
/// disjointness certificate).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("precondition error: {0}")]
    Precondition(String),
    #[error("spec error in field `{field}`: {message}")]
    Spec { field: String, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
