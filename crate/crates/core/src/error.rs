use num_rational::Rational64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("requested order {requested} exceeds available q-order {available}")]
    InsufficientOrder {
        requested: Rational64,
        available: Rational64,
    },
    #[error("x-windows do not overlap")]
    DisjointWindows,
    #[error("product of two x-windowed series is not defined")]
    WindowedProduct,
    #[error("operation not defined on an x-windowed series: {0}")]
    WindowedOperand(&'static str),
    #[error("root of unity exp(2 pi i {0}) is not a Gaussian rational")]
    NonGaussianRoot(Rational64),
    #[error("series is not invertible: {0}")]
    NotInvertible(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point too close to a pole: |{what}| = {modulus:e}")]
    PoleProximity { what: String, modulus: f64 },
    #[error("truncation cap reached: {0}")]
    TruncationCap(String),
    #[error("least-squares system ill conditioned (condition number {0:e})")]
    IllConditioned(f64),
    #[error("residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("leading q-exponent {found} differs from expected {expected}")]
    LeadingExponent {
        found: Rational64,
        expected: Rational64,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
