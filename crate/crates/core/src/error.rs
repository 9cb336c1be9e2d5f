use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by evaluation, quadrature and the estimators built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {z} lies outside the evaluation domain of {node}")]
    Domain { z: Complex64, node: &'static str },

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("quadrature fault: {0}")]
    QuadratureFault(String),

    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
}

pub type Result<T> = std::result::Result<T, Error>;
