//! Entanglement, Gaussian steering, purities and occupations of two-mode
//! states.

use std::fmt;
use std::str::FromStr;

use crate::covariance::{CovarianceMatrix, QuadratureBasis};
use crate::error::{Error, Result};
use crate::model::{polariton_frequencies_analytic, ModelParams};
use crate::symplectic::partial_transpose_min_eigenvalue;

/// Values at or below this count as zero steering.
pub const STEERING_THRESHOLD: f64 = 1e-12;

/// Local symplectic invariants of a bare-basis covariance matrix and the
/// symplectic eigenvalues `d̃_∓` of its partial transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticInvariants {
    pub i_a: f64,
    pub i_b: f64,
    pub i_c: f64,
    pub i_ab: f64,
    pub d_minus: f64,
    pub d_plus: f64,
}

/// `d̃_± = sqrt((Δ̃ ± sqrt(Δ̃² - 4I_ab))/2)` with `Δ̃ = I_a + I_b - 2I_c`.
///
/// `d̃₋` is evaluated as `sqrt(2I_ab / (Δ̃ + sqrt(Δ̃² - 4I_ab)))`, the same
/// quantity without the cancellation in `Δ̃ - sqrt(...)`.
pub fn partial_transpose_invariants(i_a: f64, i_b: f64, i_c: f64, i_ab: f64) -> (f64, f64) {
    let delta = i_a + i_b - 2.0 * i_c;
    let disc = (delta * delta - 4.0 * i_ab).max(0.0).sqrt();
    let sum = delta + disc;
    let d_minus_sq = if sum > 0.0 { 2.0 * i_ab / sum } else { 0.0 };
    (d_minus_sq.max(0.0).sqrt(), (sum / 2.0).max(0.0).sqrt())
}

fn invariants_unchecked(gamma: &CovarianceMatrix) -> SymplecticInvariants {
    let i_a = gamma.block_a().determinant();
    let i_b = gamma.block_b().determinant();
    let i_c = gamma.block_c().determinant();
    let i_ab = gamma.entries().determinant();
    let (d_minus, d_plus) = partial_transpose_invariants(i_a, i_b, i_c, i_ab);
    SymplecticInvariants {
        i_a,
        i_b,
        i_c,
        i_ab,
        d_minus,
        d_plus,
    }
}

fn checked(gamma: &CovarianceMatrix) -> Result<()> {
    gamma.require_basis(QuadratureBasis::Bare)?;
    gamma.check_physical()
}

pub fn symplectic_invariants(gamma: &CovarianceMatrix) -> Result<SymplecticInvariants> {
    checked(gamma)?;
    Ok(invariants_unchecked(gamma))
}

/// `-ln 2d̃₋` without clipping; positive exactly for entangled states.
///
/// `d̃₋` is taken from the symplectic spectrum of the partially transposed
/// matrix. The invariant formula loses half the digits when `d̃₋ ≈ d̃₊`
/// (product states), where it would report entanglement of order 1e-8.
pub fn log_negativity_raw(gamma: &CovarianceMatrix) -> Result<f64> {
    checked(gamma)?;
    let d_minus = partial_transpose_min_eigenvalue(gamma.entries())
        .ok_or_else(|| Error::Unphysical("covariance matrix is not positive definite".into()))?;
    Ok(-(2.0 * d_minus).ln())
}

/// `E_N = max(0, -ln 2d̃₋)`.
pub fn log_negativity(gamma: &CovarianceMatrix) -> Result<f64> {
    Ok(log_negativity_raw(gamma)?.max(0.0))
}

/// Unclipped `(½ ln(I_a/4I_ab), ½ ln(I_b/4I_ab))`.
pub fn gaussian_steering_raw(gamma: &CovarianceMatrix) -> Result<(f64, f64)> {
    let inv = symplectic_invariants(gamma)?;
    Ok((
        0.5 * (inv.i_a / (4.0 * inv.i_ab)).ln(),
        0.5 * (inv.i_b / (4.0 * inv.i_ab)).ln(),
    ))
}

/// Steering `(G^{a→b}, G^{b→a})`, each clipped at zero.
pub fn gaussian_steering(gamma: &CovarianceMatrix) -> Result<(f64, f64)> {
    let (ab, ba) = gaussian_steering_raw(gamma)?;
    Ok((ab.max(0.0), ba.max(0.0)))
}

/// Purities `(μ_a, μ_b, μ_ab) = (1/4I_a, 1/4I_b, 1/16I_ab)`.
pub fn purities(gamma: &CovarianceMatrix) -> Result<(f64, f64, f64)> {
    let inv = symplectic_invariants(gamma)?;
    Ok((
        1.0 / (4.0 * inv.i_a),
        1.0 / (4.0 * inv.i_b),
        1.0 / (16.0 * inv.i_ab),
    ))
}

/// Mean excitation numbers `N_m = (⟨x_m²⟩ + ⟨p_m²⟩ - 1)/2`.
pub fn average_occupations(gamma: &CovarianceMatrix) -> Result<(f64, f64)> {
    checked(gamma)?;
    Ok((
        (gamma.get(0, 0) + gamma.get(1, 1) - 1.0) / 2.0,
        (gamma.get(2, 2) + gamma.get(3, 3) - 1.0) / 2.0,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SteeringClass {
    NoWay,
    OneWayAtoB,
    OneWayBtoA,
    TwoWay,
}

impl fmt::Display for SteeringClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SteeringClass::NoWay => "NoWay",
            SteeringClass::OneWayAtoB => "OneWayAtoB",
            SteeringClass::OneWayBtoA => "OneWayBtoA",
            SteeringClass::TwoWay => "TwoWay",
        })
    }
}

impl FromStr for SteeringClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "NoWay" => Ok(SteeringClass::NoWay),
            "OneWayAtoB" => Ok(SteeringClass::OneWayAtoB),
            "OneWayBtoA" => Ok(SteeringClass::OneWayBtoA),
            "TwoWay" => Ok(SteeringClass::TwoWay),
            other => Err(Error::Parse(format!("unknown steering class {other:?}"))),
        }
    }
}

pub fn classify_steering(g_ab: f64, g_ba: f64) -> SteeringClass {
    match (g_ab > STEERING_THRESHOLD, g_ba > STEERING_THRESHOLD) {
        (false, false) => SteeringClass::NoWay,
        (true, false) => SteeringClass::OneWayAtoB,
        (false, true) => SteeringClass::OneWayBtoA,
        (true, true) => SteeringClass::TwoWay,
    }
}

/// Classification read off the purity ordering: `a` steers `b` when
/// `μ_ab > μ_a` (equivalently `I_a > 4I_ab`), and symmetrically for `b`.
pub fn classify_from_purities(mu_a: f64, mu_b: f64, mu_ab: f64) -> SteeringClass {
    classify_steering(0.5 * (mu_ab / mu_a).ln(), 0.5 * (mu_ab / mu_b).ln())
}

/// All correlation measures of one bare-basis state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub e_n: f64,
    pub g_ab: f64,
    pub g_ba: f64,
    pub mu_a: f64,
    pub mu_b: f64,
    pub mu_ab: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub classification: SteeringClass,
}

impl CorrelationReport {
    pub fn from_covariance(gamma: &CovarianceMatrix) -> Result<Self> {
        let e_n = log_negativity(gamma)?;
        let (g_ab, g_ba) = gaussian_steering(gamma)?;
        let (mu_a, mu_b, mu_ab) = purities(gamma)?;
        let (n_a, n_b) = average_occupations(gamma)?;
        Ok(Self {
            e_n,
            g_ab,
            g_ba,
            mu_a,
            mu_b,
            mu_ab,
            n_a,
            n_b,
            classification: classify_steering(g_ab, g_ba),
        })
    }
}

/// `ζ = (4Dω_a + ω_a² + ω_Lω_U)(ω_b² + ω_Lω_U)` and the frequencies it uses.
fn zeta(params: &ModelParams) -> Result<(f64, f64, f64, f64)> {
    let lambda = params.lambda()?;
    let (wu, wl) = polariton_frequencies_analytic(params)?;
    let (wa, wb, d) = (params.omega_a(), params.omega_b(), params.diamag());
    let z = (4.0 * d * wa + wa * wa + wl * wu) * (wb * wb + wl * wu);
    Ok((z, lambda, wu, wl))
}

/// Closed-form ground-state logarithmic negativity for `λ₁ = λ₂`:
/// `-ln(|√ζ - 2λ√(ω_aω_b)| / ((ω_L + ω_U)√(ω_Uω_L)))`, clipped at zero.
pub fn ground_state_en_closed(params: &ModelParams) -> Result<f64> {
    let (z, lambda, wu, wl) = zeta(params)?;
    let root = (params.omega_a() * params.omega_b()).sqrt();
    let d_minus2 = (z.sqrt() - 2.0 * lambda * root).abs() / ((wl + wu) * (wu * wl).sqrt());
    Ok((-d_minus2.ln()).max(0.0))
}

/// Closed-form ground-state steering (equal in both directions):
/// `½ ln(ω_Lω_U(ω_L + ω_U)²ζ / (ζ - 4λ²ω_aω_b)²)`, clipped at zero.
pub fn ground_state_steering_closed(params: &ModelParams) -> Result<f64> {
    let (z, lambda, wu, wl) = zeta(params)?;
    let wab = params.omega_a() * params.omega_b();
    let num = wl * wu * (wl + wu).powi(2) * z;
    let den = (z - 4.0 * lambda * lambda * wab).powi(2);
    Ok((0.5 * (num / den).ln()).max(0.0))
}
