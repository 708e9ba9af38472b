//! Quantum correlations of two ultrastrongly coupled bosonic modes.
//!
//! The crate diagonalizes the bilinear Hopfield Hamiltonian, builds Gaussian
//! covariance matrices for ground and thermal steady states, and evaluates
//! logarithmic negativity, Gaussian EPR steering and purities. Open-system
//! dynamics in a common Ohmic reservoir is handled through the second-moment
//! equations of the polariton operators.
//!
//! Units: ħ = k_B = 1, frequencies and temperatures are given in units of the
//! matter frequency `omega_b` when it is set to 1.

// `!(x > 0.0)` style guards deliberately route NaN to the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod correlations;
pub mod covariance;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod local_generator;
pub mod model;
pub mod moments;
pub mod no_diamagnetic;
pub mod sampling;
pub mod sweep;
pub mod symplectic;
pub mod thermal;
pub mod verify;

pub use basis::{
    bogoliubov_diagonalize_numeric, hopfield_coefficients, normal_modes, PolaritonBasis,
};
pub use correlations::{
    average_occupations, classify_steering, gaussian_steering, ground_state_en_closed,
    ground_state_steering_closed, log_negativity, purities, symplectic_invariants,
    CorrelationReport, SteeringClass, SymplecticInvariants,
};
pub use covariance::{
    build_transform_u, ground_state_covariance_closed, ground_state_covariance_generic,
    polariton_thermal_covariance, thermal_covariance_closed, thermal_covariance_generic,
    to_bare_basis, BasisTransform, CovarianceMatrix, QuadratureBasis,
};
pub use dynamics::{
    collective_rates, evolve_second_moments, steady_state_second_moments, RateSet, SecondMoments,
};
pub use error::{Error, Result};
pub use local_generator::{
    asymmetry_diagnostic, local_representation_coefficients, resonant_balance_frequency,
};
pub use model::{
    build_dynamical_matrix, critical_coupling, polariton_frequencies_analytic, DynamicalMatrix,
    ModelParams,
};
pub use moments::{second_order_correlators, CorrelatorTable};
pub use no_diamagnetic::{appendix_c_coefficients, appendix_c_covariance};
pub use thermal::{thermal_occupation, Environment};
