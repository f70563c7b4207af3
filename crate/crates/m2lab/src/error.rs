use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An element or matrix does not belong to the field it was used with.
    #[error("field mismatch: {0}")]
    SpecMismatch(String),

    /// Multiplicative inverse of zero requested.
    #[error("division by zero in F_{q}")]
    DivisionByZero { q: u32 },

    /// Matrix inverse or SL2 scaling requested for a singular matrix.
    #[error("matrix is singular")]
    SingularMatrix,

    /// Precondition on an operation's arguments was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A size, memory, or q limit was exceeded.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Spectral analysis of a digraph requires normality.
    #[error("digraph is not normal: {0}")]
    NormalityRequired(String),

    /// Iterative eigensolver hit its iteration cap.
    #[error("eigensolver did not converge: relative residual {residual:.3e}")]
    Convergence { residual: f64 },

    /// Operation not supported for this input (e.g. directed tensor factors).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Bad command line or config file.
    #[error("usage: {0}")]
    Usage(String),

    #[error("cache file rejected: {0}")]
    BadCache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
