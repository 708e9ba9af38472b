use thiserror::Error;

use crate::covariance::QuadratureBasis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The quadratic Hamiltonian has no stable normal-mode decomposition:
    /// a polariton frequency is complex, zero, or carries negative energy.
    #[error("dynamically unstable spectrum: {0}")]
    Instability(String),

    #[error("degenerate polariton spectrum (|omega_U - omega_L| = {gap:e})")]
    DegenerateSpectrum { gap: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("covariance matrix in {found} basis, expected {expected}")]
    BasisMismatch {
        expected: QuadratureBasis,
        found: QuadratureBasis,
    },

    #[error("covariance matrix is not physical: {0}")]
    Unphysical(String),

    #[error("no steady state for the {branch} polariton (emission {down:e}, absorption {up:e})")]
    NoSteadyState {
        branch: &'static str,
        down: f64,
        up: f64,
    },

    #[error("integration step too large: dt * max rate = {0:e} exceeds 0.1")]
    StepSize(f64),

    #[error("parse error: {0}")]
    Parse(String),
}
