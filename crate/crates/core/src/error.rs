use thiserror::Error;

/// Errors raised by the numerical routines and the command-line driver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DunklError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{strategy} failed to converge at z = {z}")]
    NonConvergence { z: f64, strategy: &'static str },

    #[error("grid does not cover the effective support: {0}")]
    GridCoverage(String),

    #[error("eigen-decomposition for a {order}-point Gauss-Jacobi rule failed")]
    Quadrature { order: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("atom check failed: {0}")]
    InvalidAtom(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, DunklError>;

impl From<std::io::Error> for DunklError {
    fn from(e: std::io::Error) -> Self {
        DunklError::Io(e.to_string())
    }
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(DunklError::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(DunklError::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}
