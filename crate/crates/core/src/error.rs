use thiserror::Error;

/// Errors raised by the math, frame and check layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {0} is outside 1..=3")]
    IndexOutOfRange(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("transformation matrix is not orthogonal (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    NotOrthogonal { residual: f64, tolerance: f64 },

    #[error("transformation matrix is not a proper rotation (det = {det:.6})")]
    ImproperRotation { det: f64 },

    #[error("normal vector must have unit length, got |n| = {0:.6e}")]
    NonUnitNormal(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
