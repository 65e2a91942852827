use thiserror::Error;

#[derive(Debug, Error)]
pub enum QqoError {
    #[error("matrix is not hermitian (max |m - m*| = {asymmetry:e})")]
    NonHermitianInput { asymmetry: f64 },

    #[error("expected a real vector, imaginary parts up to {max_imag:e}")]
    NonRealInput { max_imag: f64 },

    #[error("epsilon = {epsilon} is outside the admissible range |epsilon| <= {limit}")]
    DomainError { epsilon: f64, limit: f64 },

    #[error("vector norm {norm} exceeds the unit ball")]
    OutsideBall { norm: f64 },

    #[error("invalid coefficient tensor: {0}")]
    InvalidTensor(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed tensor file: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QqoError>;
