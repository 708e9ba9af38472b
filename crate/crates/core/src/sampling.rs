//! Seeded random parameter grids and random physical states for property
//! checks.

use nalgebra::{Matrix2, Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{hopfield_coefficients, DEGENERACY_TOL};
use crate::covariance::{CovarianceMatrix, QuadratureBasis};
use crate::model::ModelParams;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hopfield models with `D = λ²/ω_b`, `ω_b = 1`, `ω_a ∈ [0.1, 3]`,
/// `λ ∈ [0.01, 1.5]`, skipping near-degenerate spectra.
pub fn natural_hopfield_points(seed: u64, count: usize) -> Vec<ModelParams> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = ModelParams::hopfield(r.random_range(0.1..3.0), 1.0, r.random_range(0.01..1.5))
            .expect("sampled parameters are valid");
        if hopfield_coefficients(&p).is_ok_and(|b| b.gap() > 1e3 * DEGENERACY_TOL) {
            out.push(p);
        }
    }
    out
}

/// Stable models with `λ₁ = λ₂ = λ` and `D` drawn from `[0, 2λ²]`.
pub fn hopfield_family_points(seed: u64, count: usize) -> Vec<ModelParams> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let wa = r.random_range(0.1..3.0);
        let lambda: f64 = r.random_range(0.01..1.2);
        let d = r.random_range(0.0..2.0) * lambda * lambda;
        let p = ModelParams::new(wa, 1.0, lambda, lambda, d).expect("sampled parameters are valid");
        let Ok(b) = hopfield_coefficients(&p) else {
            continue;
        };
        // keep clear of the instability edge, where ω_L → 0
        if b.gap() > 1e3 * DEGENERACY_TOL && b.omega_lower() > 1e-2 {
            out.push(p);
        }
    }
    out
}

fn embed(block: Matrix2<f64>, mode: usize) -> Matrix4<f64> {
    let mut s = Matrix4::identity();
    s.fixed_view_mut::<2, 2>(2 * mode, 2 * mode)
        .copy_from(&block);
    s
}

fn random_symplectic(r: &mut ChaCha8Rng) -> Matrix4<f64> {
    let mut s = Matrix4::identity();
    for _ in 0..6 {
        let g = match r.random_range(0..4) {
            0 => {
                let x: f64 = r.random_range(-1.0..1.0);
                embed(
                    Matrix2::new(x.exp(), 0.0, 0.0, (-x).exp()),
                    r.random_range(0..2),
                )
            }
            1 => {
                let (sn, cs) = r.random_range(0.0..std::f64::consts::TAU).sin_cos();
                embed(Matrix2::new(cs, sn, -sn, cs), r.random_range(0..2))
            }
            2 => {
                let (sn, cs) = r.random_range(0.0..std::f64::consts::TAU).sin_cos();
                #[rustfmt::skip]
                let bs = Matrix4::new(
                    cs, 0.0, sn, 0.0,
                    0.0, cs, 0.0, sn,
                    -sn, 0.0, cs, 0.0,
                    0.0, -sn, 0.0, cs,
                );
                bs
            }
            _ => {
                let x: f64 = r.random_range(-1.0..1.0);
                let (ch, sh) = (x.cosh(), x.sinh());
                #[rustfmt::skip]
                let tms = Matrix4::new(
                    ch, 0.0, sh, 0.0,
                    0.0, ch, 0.0, -sh,
                    sh, 0.0, ch, 0.0,
                    0.0, -sh, 0.0, ch,
                );
                tms
            }
        };
        s = g * s;
    }
    s
}

/// A random bare-basis Gaussian state: a product of thermal states with
/// symplectic eigenvalues in `[1/2, 3]` passed through random squeezers,
/// phase rotations, beam splitters and two-mode squeezers.
pub fn random_physical_covariance(r: &mut ChaCha8Rng) -> CovarianceMatrix {
    let nu1 = r.random_range(0.5..3.0);
    let nu2 = r.random_range(0.5..3.0);
    let s = random_symplectic(r);
    let d = Matrix4::from_diagonal(&Vector4::new(nu1, nu1, nu2, nu2));
    CovarianceMatrix::new(s * d * s.transpose(), QuadratureBasis::Bare)
}
