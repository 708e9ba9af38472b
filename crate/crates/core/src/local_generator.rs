//! The common-reservoir dissipator written in the bare operators, and the
//! diagnostics of its asymmetry between the two modes.
//!
//! Substituting `p_j = Σ_m c_m o_m` with `o = (a, b, a†, b†)` into
//! `Σ_j Γ^C(-ω_j) 𝒟[p_j] + Γ^C(ω_j) 𝒟[p_j†]` gives
//! `Σ_mn K_mn (o_m ρ o_n† - ½{o_n† o_m, ρ})` with the real symmetric matrix
//! `K_mn = Σ_j Γ^C(-ω_j) c_m c_n + Γ^C(ω_j) c_σ(m) c_σ(n)`, where `σ` swaps
//! each operator with its adjoint.

use std::fmt;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::basis::PolaritonBasis;
use crate::dynamics::RateSet;
use crate::error::{Error, Result};
use crate::thermal::thermal_occupation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    A,
    B,
    ADag,
    BDag,
}

impl Ladder {
    pub const ALL: [Ladder; 4] = [Ladder::A, Ladder::B, Ladder::ADag, Ladder::BDag];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn adjoint(self) -> Ladder {
        match self {
            Ladder::A => Ladder::ADag,
            Ladder::B => Ladder::BDag,
            Ladder::ADag => Ladder::A,
            Ladder::BDag => Ladder::B,
        }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ladder::A => "a",
            Ladder::B => "b",
            Ladder::ADag => "a†",
            Ladder::BDag => "b†",
        })
    }
}

const SIGMA: [usize; 4] = [2, 3, 0, 1];

/// Coefficients of the dissipator in the local operator basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalGenerator {
    kossakowski: Matrix4<f64>,
}

impl LocalGenerator {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.kossakowski
    }

    /// Prefactor of `o_m ρ o_n† - ½{o_n† o_m, ρ}`, labelled `ℛ[o_m, o_n†]`.
    /// For instance `coefficient(A, A)` multiplies `ℛ[a, a†]`.
    pub fn coefficient(&self, m: Ladder, n: Ladder) -> f64 {
        self.kossakowski[(m.index(), n.index())]
    }

    /// All sixteen `(o_m, o_n†, K_mn)` families.
    pub fn families(&self) -> Vec<(Ladder, Ladder, f64)> {
        Ladder::ALL
            .iter()
            .flat_map(|&m| {
                Ladder::ALL
                    .iter()
                    .map(move |&n| (m, n.adjoint(), self.coefficient(m, n)))
            })
            .collect()
    }
}

pub fn local_representation_coefficients(
    basis: &PolaritonBasis,
    rates: &RateSet,
) -> LocalGenerator {
    let mut k = Matrix4::zeros();
    for (c, down, up) in [
        (basis.coeffs_upper(), rates.down_u, rates.up_u),
        (basis.coeffs_lower(), rates.down_l, rates.up_l),
    ] {
        for m in 0..4 {
            for n in 0..4 {
                k[(m, n)] += down * c[m] * c[n] + up * c[SIGMA[m]] * c[SIGMA[n]];
            }
        }
    }
    LocalGenerator { kossakowski: k }
}

/// Commutator matrix `J_uv = [o_u, o_v]` for `o = (o_1, o_2, o_1†, o_2†)`.
pub fn commutator_matrix() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(0, 2)] = 1.0;
    j[(1, 3)] = 1.0;
    j[(2, 0)] = -1.0;
    j[(3, 1)] = -1.0;
    j
}

/// Dissipative part of `d⟨o_u o_v⟩/dt` generated by the local form, from
/// `ℒ†(X) = Σ_mn K_mn ½(o_n†[X, o_m] + [o_n†, X] o_m)`.
pub fn local_moment_derivative(
    generator: &LocalGenerator,
    moments: &Matrix4<Complex64>,
) -> Matrix4<Complex64> {
    let j = commutator_matrix();
    let k = generator.matrix();
    Matrix4::from_fn(|u, v| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..4 {
            for n in 0..4 {
                if k[(m, n)] == 0.0 {
                    continue;
                }
                let sn = SIGMA[n];
                let term = moments[(sn, u)] * j[(v, m)]
                    + moments[(sn, v)] * j[(u, m)]
                    + moments[(v, m)] * j[(sn, u)]
                    + moments[(u, m)] * j[(sn, v)];
                acc += term * (0.5 * k[(m, n)]);
            }
        }
        acc
    })
}

/// Bogoliubov matrix with rows `(p_U, p_L, p_U†, p_L†)` in terms of
/// `(a, b, a†, b†)`.
pub fn bogoliubov_matrix(basis: &PolaritonBasis) -> Matrix4<f64> {
    let (u, l) = (basis.coeffs_upper(), basis.coeffs_lower());
    #[rustfmt::skip]
    let c = Matrix4::new(
        u[0], u[1], u[2], u[3],
        l[0], l[1], l[2], l[3],
        u[2], u[3], u[0], u[1],
        l[2], l[3], l[0], l[1],
    );
    c
}

/// Dissipative part of `d⟨o_u o_v⟩/dt` from the polariton equations of
/// motion, mapped back to the bare operators.
pub fn global_moment_derivative(
    basis: &PolaritonBasis,
    rates: &RateSet,
    moments: &Matrix4<Complex64>,
) -> Result<Matrix4<Complex64>> {
    let c = bogoliubov_matrix(basis);
    let c_inv = c
        .try_inverse()
        .ok_or_else(|| Error::Precondition("singular Bogoliubov matrix".into()))?;
    let cc = c.map(|v| Complex64::new(v, 0.0));
    let cc_inv = c_inv.map(|v| Complex64::new(v, 0.0));
    let mp = cc * moments * cc.transpose();
    let (ups_u, ups_l) = rates.upsilon();
    let ups = [ups_u, ups_l, ups_u, ups_l];
    let mut dmp = Matrix4::from_fn(|i, k| mp[(i, k)] * (0.5 * (ups[i] + ups[k])));
    // ⟨p_j† p_j⟩ gains Γ^C(ω_j), ⟨p_j p_j†⟩ gains Γ^C(-ω_j)
    dmp[(2, 0)] += rates.up_u;
    dmp[(3, 1)] += rates.up_l;
    dmp[(0, 2)] += rates.down_u;
    dmp[(1, 3)] += rates.down_l;
    Ok(cc_inv * dmp * cc_inv.transpose())
}

/// `(N(ω_U) - N(ω_L)) cos 2θ`, which vanishes when the two modes couple to
/// the reservoir symmetrically.
pub fn asymmetry_diagnostic(basis: &PolaritonBasis, temperature: f64) -> Result<f64> {
    let theta = basis
        .theta()
        .ok_or_else(|| Error::Precondition("basis carries no mixing angle".into()))?;
    let dn = thermal_occupation(basis.omega_upper(), temperature)
        - thermal_occupation(basis.omega_lower(), temperature);
    Ok(dn * (2.0 * theta).cos())
}

/// Cavity frequency where `cos 2θ = 0` for `D = λ²/ω_b`, i.e. the positive
/// root of `ω_a² + 4λ²ω_a/ω_b - ω_b² = 0`.
pub fn resonant_balance_frequency(lambda: f64, omega_b: f64) -> f64 {
    let shift = 4.0 * lambda * lambda / omega_b;
    (-shift + (shift * shift + 4.0 * omega_b * omega_b).sqrt()) / 2.0
}
