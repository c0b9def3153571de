use thiserror::Error;

use crate::lp::LpError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Bloch vector norm {norm} exceeds 1 (state not positive semidefinite)")]
    InvalidState { norm: f64 },

    #[error("effect eigenvalues ({min}, {max}) outside [0, 1]")]
    InvalidEffect { min: f64, max: f64 },

    #[error("POVM invalid: completeness residual {residual}, min eigenvalue {min_eigenvalue}")]
    InvalidPovm { residual: f64, min_eigenvalue: f64 },

    #[error("outcome weights {alpha:?} invalid: each must lie in [0,1] and they must sum to 2")]
    InvalidAlpha { alpha: [f64; 3] },

    #[error("derived preparation rho_{index}1 has Bloch norm {norm} > 1")]
    InfeasiblePreparation { index: usize, norm: f64 },

    #[error("encoding violates parity concealment: residuals {residuals:?}")]
    ConstraintViolation { residuals: Vec<f64> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("linear program: {0}")]
    Lp(#[from] LpError),

    #[error("linear program unexpectedly {0}")]
    LpStatus(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
