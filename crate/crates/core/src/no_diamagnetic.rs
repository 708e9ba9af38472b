//! Closed forms for the Hopfield model without the A² term (`D = 0`).

use nalgebra::Matrix4;

use crate::basis::{mixing_angle, PolaritonBasis, DEGENERACY_TOL};
use crate::covariance::{CovarianceMatrix, QuadratureBasis};
use crate::error::{Error, Result};
use crate::model::{critical_coupling, polariton_frequencies_analytic, ModelParams};
use crate::thermal::coth_half;

fn require_no_a2(params: &ModelParams) -> Result<f64> {
    let lambda = params.lambda()?;
    if params.diamag() != 0.0 {
        return Err(Error::Precondition(format!(
            "needs D = 0 (got {})",
            params.diamag()
        )));
    }
    if lambda <= 0.0 {
        return Err(Error::Precondition("needs lambda > 0".into()));
    }
    let lc = critical_coupling(params.omega_a(), params.omega_b())?;
    if lambda >= lc {
        return Err(Error::Instability(format!(
            "lambda = {lambda} >= lambda_C = {lc} without diamagnetic term"
        )));
    }
    Ok(lambda)
}

fn frequencies(params: &ModelParams) -> Result<(f64, f64)> {
    let (wu, wl) = polariton_frequencies_analytic(params)?;
    if wu - wl < DEGENERACY_TOL {
        return Err(Error::DegenerateSpectrum { gap: wu - wl });
    }
    Ok((wu, wl))
}

/// Normalization `𝒩_j = sqrt((ω_b+ω_j)(-4λ²ω_a³ + (ω_b+ω_j)(ω_a²-ω_j²)² + 4λ²ω_aω_j(ω_b+2ω_j))) / (2λ²ω_a)`.
pub fn normalization(params: &ModelParams, omega_j: f64) -> Result<f64> {
    let lambda = require_no_a2(params)?;
    let (wa, wb) = (params.omega_a(), params.omega_b());
    let l2 = lambda * lambda;
    let radicand = (wb + omega_j)
        * (-4.0 * l2 * wa.powi(3)
            + (wb + omega_j) * (wa * wa - omega_j * omega_j).powi(2)
            + 4.0 * l2 * wa * omega_j * (wb + 2.0 * omega_j));
    if !(radicand > 0.0) {
        return Err(Error::Instability(format!(
            "non-positive norm^2 {radicand:e} at omega = {omega_j}"
        )));
    }
    Ok(radicand.sqrt() / (2.0 * l2 * wa))
}

fn sign_fixed(mut c: [f64; 4]) -> [f64; 4] {
    if c[0] < 0.0 {
        c.iter_mut().for_each(|v| *v = -*v);
    }
    c
}

fn general_branch(params: &ModelParams, lambda: f64, wj: f64) -> Result<[f64; 4]> {
    let (wa, wb) = (params.omega_a(), params.omega_b());
    let n = normalization(params, wj)?;
    let w = -(wa + wj) * (wb + wj) / (2.0 * lambda * wa);
    let x = -1.0 + (wb + wj) * (wa * wa - wj * wj) / (2.0 * lambda * lambda * wa);
    let y = -(wa - wj) * (wb + wj) / (2.0 * lambda * wa);
    // the closed form is written for (w, x, -y, -z) of the operator convention
    Ok(sign_fixed([w / n, x / n, -y / n, -1.0 / n]))
}

/// Resonant branches `(r/λ + 1, r/λ + 1, 1, 1)/ℳ_U` and
/// `(r/λ - 1, 1 - r/λ, -1, 1)/ℳ_L` with `r_± = ω + √(ω(ω ± 2λ))` and
/// `ℳ_± = √(-2λ² + 2(ω ± λ + √(ω(ω ± 2λ)))²)/λ`.
fn resonant_branches(omega: f64, lambda: f64) -> ([f64; 4], [f64; 4]) {
    let branch = |s: f64| {
        let root = (omega * (omega + s * 2.0 * lambda)).sqrt();
        let r = omega + root;
        let m =
            (-2.0 * lambda * lambda + 2.0 * (omega + s * lambda + root).powi(2)).sqrt() / lambda;
        (r / lambda, m)
    };
    let (ru, mu) = branch(1.0);
    let (rl, ml) = branch(-1.0);
    (
        [(ru + 1.0) / mu, (ru + 1.0) / mu, 1.0 / mu, 1.0 / mu],
        sign_fixed([(rl - 1.0) / ml, (1.0 - rl) / ml, -1.0 / ml, 1.0 / ml]),
    )
}

/// Polariton coefficients of the `D = 0` model, with the overall sign of
/// each branch fixed so that `w_j > 0`. At resonance the reduced forms are
/// used.
pub fn appendix_c_coefficients(params: &ModelParams) -> Result<PolaritonBasis> {
    let lambda = require_no_a2(params)?;
    let (wu, wl) = frequencies(params)?;
    let theta = Some(mixing_angle(params, wu, wl)?);
    let (upper, lower) = if params.is_resonant() {
        resonant_branches(params.omega_b(), lambda)
    } else {
        (
            general_branch(params, lambda, wu)?,
            general_branch(params, lambda, wl)?,
        )
    };
    PolaritonBasis::from_parts(wu, wl, theta, upper, lower, 1e-9)
}

/// Closed-form thermal covariance of the `D = 0` model in the canonical
/// `(x_a, p_a, x_b, p_b)` ordering, with `c_j = 1 + 2N(ω_j)`,
/// `δ(ω) = (4λ²ω_a - ω_a²(ω_b+ω) + ω²(ω_b+ω))²`,
/// `ξ(ω) = ω(ω_b+ω)(-4λ²ω_a + (ω_b+ω)(ω_a²-ω²))` and
/// `Δ = (ω_b+ω_L)(ω_b+ω_U)(ω_a²+ω_Lω_U) - 4λ²ω_a(ω_b+ω_L+ω_U)`.
pub fn appendix_c_covariance(params: &ModelParams, temperature: f64) -> Result<CovarianceMatrix> {
    let lambda = require_no_a2(params)?;
    let (wu, wl) = frequencies(params)?;
    let (wa, wb) = (params.omega_a(), params.omega_b());
    let (nu, nl) = (normalization(params, wu)?, normalization(params, wl)?);
    // weights N_U² c_U and N_L² c_L
    let ku = nu * nu * coth_half(wu, temperature);
    let kl = nl * nl * coth_half(wl, temperature);
    let l2 = lambda * lambda;
    let delta = |w: f64| (4.0 * l2 * wa - wa * wa * (wb + w) + w * w * (wb + w)).powi(2);
    let xi = |w: f64| w * (wb + w) * (-4.0 * l2 * wa + (wb + w) * (wa * wa - w * w));
    let big_delta = (wb + wl) * (wb + wu) * (wa * wa + wl * wu) - 4.0 * l2 * wa * (wb + wl + wu);
    let (bl2, bu2) = ((wb + wl).powi(2), (wb + wu).powi(2));
    let split2 = (wl * wl - wu * wu).powi(2);
    let gap_den = (wl - wu).powi(2) * big_delta * big_delta;

    let pa = l2 * (ku * bl2 * (wa * wa - wl * wl).powi(2) + kl * bu2 * (wa * wa - wu * wu).powi(2))
        / (2.0 * bl2 * bu2 * split2);
    let xa = l2 * wa * wa * (ku * delta(wl) + kl * delta(wu)) / (2.0 * gap_den);
    let pb = 2.0 * l2 * l2 * wa * wa * (ku * bl2 + kl * bu2) / (bl2 * bu2 * split2);
    let xb = 2.0 * l2 * l2 * wa * wa * (ku * wl * wl * bl2 + kl * wu * wu * bu2) / gap_den;
    let pp = l2 * lambda * wa * (ku * bl2 * (wa * wa - wl * wl) + kl * bu2 * (wa * wa - wu * wu))
        / (bl2 * bu2 * split2);
    let xx = l2 * lambda * wa * wa * (ku * xi(wl) + kl * xi(wu)) / gap_den;
    #[rustfmt::skip]
    let g = Matrix4::new(
        xa,  0.0, xx,  0.0,
        0.0, pa,  0.0, pp,
        xx,  0.0, xb,  0.0,
        0.0, pp,  0.0, pb,
    );
    Ok(CovarianceMatrix::new(g, QuadratureBasis::Bare))
}

/// Resonant single-mode variances `(⟨x²⟩, ⟨p²⟩)`, equal for both modes.
///
/// `⟨x²⟩ = ω_b(𝒩_U²c_U(2λ-ω_b)(λ+ω_b-√(ω_b(2λ+ω_b))) + 𝒩_L²c_L(2λ+ω_b)(λ-ω_b+√(ω_b(ω_b-2λ)))) / (16ω_b(4λ²-ω_b²))`
/// and `⟨p²⟩ = (c_Uω_U + c_Lω_L)/(4ω_b)`.
pub fn appendix_c_resonant_variances(params: &ModelParams, temperature: f64) -> Result<(f64, f64)> {
    let lambda = require_no_a2(params)?;
    if !params.is_resonant() {
        return Err(Error::Precondition("needs omega_a = omega_b".into()));
    }
    let (wu, wl) = frequencies(params)?;
    let wb = params.omega_b();
    let (cu, cl) = (coth_half(wu, temperature), coth_half(wl, temperature));
    let (nu, nl) = (normalization(params, wu)?, normalization(params, wl)?);
    let x = wb
        * (nu * nu * cu * (2.0 * lambda - wb) * (lambda + wb - (wb * (2.0 * lambda + wb)).sqrt())
            + nl * nl
                * cl
                * (2.0 * lambda + wb)
                * (lambda - wb + (wb * (wb - 2.0 * lambda)).sqrt()))
        / (16.0 * wb * (4.0 * lambda * lambda - wb * wb));
    let p = (cu * wu + cl * wl) / (4.0 * wb);
    Ok((x, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{bogoliubov_diagonalize_numeric, hopfield_coefficients};
    use crate::covariance::thermal_covariance_generic;
    use crate::model::build_dynamical_matrix;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn resonant_magnitudes_are_symmetric() {
        let b = appendix_c_coefficients(&ModelParams::no_a2(1.0, 1.0, 0.25).unwrap()).unwrap();
        for c in [b.coeffs_upper(), b.coeffs_lower()] {
            assert_relative_eq!(c[0].abs(), c[1].abs(), epsilon = 1e-12);
            assert_relative_eq!(c[2].abs(), c[3].abs(), epsilon = 1e-12);
        }
    }

    #[test]
    fn off_resonant_matches_numeric() {
        let p = ModelParams::no_a2(2.0, 1.0, 0.25).unwrap();
        let c = appendix_c_coefficients(&p).unwrap();
        let n = bogoliubov_diagonalize_numeric(&build_dynamical_matrix(&p)).unwrap();
        for (x, y) in c
            .coeffs_upper()
            .iter()
            .chain(&c.coeffs_lower())
            .zip(n.coeffs_upper().iter().chain(&n.coeffs_lower()))
        {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn normalization_equals_bogoliubov_norm() {
        let p = ModelParams::no_a2(0.7, 1.0, 0.3).unwrap();
        let b = hopfield_coefficients(&p).unwrap();
        for w in [b.omega_upper(), b.omega_lower()] {
            let (wa, wb, l) = (0.7, 1.0, 0.3);
            let wt = -(wa + w) * (wb + w) / (2.0 * l * wa);
            let xt = -1.0 + (wb + w) * (wa * wa - w * w) / (2.0 * l * l * wa);
            let yt = -(wa - w) * (wb + w) / (2.0 * l * wa);
            let norm = (wt * wt + xt * xt - yt * yt - 1.0).sqrt();
            assert_relative_eq!(normalization(&p, w).unwrap(), norm, max_relative = 1e-12);
        }
    }

    #[test]
    fn preconditions() {
        assert!(matches!(
            appendix_c_coefficients(&ModelParams::hopfield(1.0, 1.0, 0.2).unwrap()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            appendix_c_coefficients(&ModelParams::no_a2(1.0, 1.0, 0.5).unwrap()),
            Err(Error::Instability(_))
        ));
        assert!(matches!(
            appendix_c_covariance(&ModelParams::no_a2(1.0, 1.0, 0.7).unwrap(), 0.1),
            Err(Error::Instability(_))
        ));
    }

    #[test]
    fn pipeline_reference_point() {
        let p = ModelParams::no_a2(2.0, 1.0, 0.25).unwrap();
        let closed = appendix_c_covariance(&p, 0.25).unwrap();
        let generic = thermal_covariance_generic(&appendix_c_coefficients(&p).unwrap(), 0.25);
        assert!(closed.max_abs_diff(&generic) < 1e-8);
    }

    #[test]
    fn resonant_subsystems_are_equal() {
        for (lambda, t) in [(0.25, 0.25), (0.4, 0.0), (0.1, 1.0)] {
            let p = ModelParams::no_a2(1.0, 1.0, lambda).unwrap();
            let g = appendix_c_covariance(&p, t).unwrap();
            assert!((g.block_a() - g.block_b()).abs().max() < 1e-10);
            let (x, pv) = appendix_c_resonant_variances(&p, t).unwrap();
            assert_relative_eq!(x, g.get(0, 0), epsilon = 1e-10);
            assert_relative_eq!(pv, g.get(1, 1), epsilon = 1e-10);
        }
    }

    #[test]
    fn weak_coupling_ground_state_is_vacuum() {
        let g = appendix_c_covariance(&ModelParams::no_a2(1.5, 1.0, 1e-5).unwrap(), 0.0).unwrap();
        assert!((g.entries() - Matrix4::identity() * 0.5).abs().max() < 1e-4);
    }

    proptest! {
        #[test]
        fn closed_form_matches_pipeline(wa in 0.1f64..3.0, frac in 0.02f64..0.98, t in 0.0f64..1.0) {
            let lambda = frac * wa.sqrt() / 2.0;
            let p = ModelParams::no_a2(wa, 1.0, lambda).unwrap();
            let Ok(b) = appendix_c_coefficients(&p) else { return Ok(()); };
            prop_assert!(b.commutator_defect() < 1e-10);
            let closed = appendix_c_covariance(&p, t).unwrap();
            let generic = thermal_covariance_generic(&b, t);
            let scale = generic.entries().abs().max().max(1.0);
            prop_assert!(closed.max_abs_diff(&generic) < 1e-8 * scale);
        }
    }
}
