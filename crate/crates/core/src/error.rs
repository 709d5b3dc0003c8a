use thiserror::Error;

/// Errors raised by the matrix, channel and norm routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("trace condition violated: {0}")]
    Trace(String),

    #[error("Kraus operators are not trace preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("state vector is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid Schatten index: {0}")]
    InvalidNorm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown channel name `{0}`")]
    UnknownChannel(String),

    #[error("malformed channel JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
