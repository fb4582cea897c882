use thiserror::Error;

/// Errors surfaced by the library.
///
/// Negative verdicts (not equivalent, not a vertex-minor) are ordinary return
/// values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GseError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vertex {vertex} out of range for a graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("size guard exceeded: {what} ({value} > {limit})")]
    SizeGuard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("multiset support is not independent")]
    DependentSupport,

    #[error("multiset is not {r}-incident")]
    NotIncident { r: u32 },

    #[error("constrained solution structure unsupported on an all-odd-degree component")]
    ClassAlphaUnsupported,

    #[error("search budget exhausted after {explored} states")]
    Exhausted { explored: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, GseError>;
