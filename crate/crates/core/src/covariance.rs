//! Two-mode covariance matrices and their construction.
//!
//! Quadratures are `x = (o + o†)/√2`, `p = (o - o†)/(i√2)` and
//! `Γ_ij = ⟨{ξ_i, ξ_j}⟩/2` for zero-mean states, so the vacuum is `I/2`.
//! Bare matrices are ordered `(x_a, p_a, x_b, p_b)`, polariton matrices
//! `(x_U, p_U, x_L, p_L)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4, Vector4};

use crate::basis::PolaritonBasis;
use crate::error::{Error, Result};
use crate::model::{polariton_frequencies_analytic, ModelParams};
use crate::symplectic::{symplectic_eigenvalues, symplectic_inverse};
use crate::thermal::coth_half;

/// Tolerance on `ν₋ ≥ 1/2` when checking physicality.
pub const PHYSICAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureBasis {
    Bare,
    Polariton,
}

impl fmt::Display for QuadratureBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadratureBasis::Bare => "bare",
            QuadratureBasis::Polariton => "polariton",
        })
    }
}

impl FromStr for QuadratureBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bare" => Ok(QuadratureBasis::Bare),
            "polariton" => Ok(QuadratureBasis::Polariton),
            other => Err(Error::Parse(format!("unknown basis tag {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    entries: Matrix4<f64>,
    basis: QuadratureBasis,
}

impl CovarianceMatrix {
    /// Wraps `entries`, replacing them by their symmetric part.
    pub fn new(entries: Matrix4<f64>, basis: QuadratureBasis) -> Self {
        Self {
            entries: (entries + entries.transpose()) * 0.5,
            basis,
        }
    }

    pub fn vacuum(basis: QuadratureBasis) -> Self {
        Self::new(Matrix4::identity() * 0.5, basis)
    }

    pub fn entries(&self) -> &Matrix4<f64> {
        &self.entries
    }

    pub fn basis(&self) -> QuadratureBasis {
        self.basis
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// First-mode block `A`.
    pub fn block_a(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Second-mode block `B`.
    pub fn block_b(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Correlation block `C` (rows of the first mode, columns of the second).
    pub fn block_c(&self) -> Matrix2<f64> {
        self.entries.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn symplectic_eigenvalues(&self) -> Option<[f64; 2]> {
        symplectic_eigenvalues(&self.entries)
    }

    pub fn is_physical(&self) -> bool {
        self.symplectic_eigenvalues()
            .is_some_and(|nu| nu[0] >= 0.5 - PHYSICAL_TOL)
    }

    /// Fails with [`Error::Unphysical`] unless `Γ + iΩ/2 ≥ 0`.
    pub fn check_physical(&self) -> Result<()> {
        match self.symplectic_eigenvalues() {
            None => Err(Error::Unphysical("matrix is not positive definite".into())),
            Some(nu) if nu[0] < 0.5 - PHYSICAL_TOL => Err(Error::Unphysical(format!(
                "smallest symplectic eigenvalue {:.6e} < 1/2",
                nu[0]
            ))),
            Some(_) => Ok(()),
        }
    }

    pub fn require_basis(&self, expected: QuadratureBasis) -> Result<()> {
        if self.basis == expected {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected,
                found: self.basis,
            })
        }
    }

    pub fn max_abs_diff(&self, other: &CovarianceMatrix) -> f64 {
        (self.entries - other.entries).abs().max()
    }
}

/// Text form: a `basis=<tag>` line followed by four whitespace-separated
/// rows. Values use the shortest representation that round-trips.
impl fmt::Display for CovarianceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "basis={}", self.basis)?;
        for i in 0..4 {
            let row: Vec<String> = (0..4)
                .map(|j| format!("{:e}", self.entries[(i, j)]))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for CovarianceMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let tag = header
            .strip_prefix("basis=")
            .ok_or_else(|| Error::Parse(format!("expected basis header, got {header:?}")))?;
        let basis: QuadratureBasis = tag.trim().parse()?;
        let mut entries = Matrix4::zeros();
        for i in 0..4 {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {}", i + 1)))?;
            let values: Vec<f64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
                })
                .collect::<Result<_>>()?;
            if values.len() != 4 {
                return Err(Error::Parse(format!(
                    "row {} has {} entries",
                    i + 1,
                    values.len()
                )));
            }
            for (j, v) in values.into_iter().enumerate() {
                entries[(i, j)] = v;
            }
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing content {extra:?}")));
        }
        Ok(Self::new(entries, basis))
    }
}

/// Symplectic map from polariton quadratures to bare quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisTransform {
    entries: Matrix4<f64>,
}

impl BasisTransform {
    /// Transform assembled from the polariton coefficients.
    pub fn from_basis(basis: &PolaritonBasis) -> Self {
        Self {
            entries: basis.quadrature_map(),
        }
    }

    /// Polariton → bare matrix.
    pub fn entries(&self) -> &Matrix4<f64> {
        &self.entries
    }

    /// Bare → polariton matrix `Ū`, i.e. the inverse of [`Self::entries`].
    pub fn bare_to_polariton(&self) -> Matrix4<f64> {
        symplectic_inverse(&self.entries)
    }
}

/// Builds the transform from the mixing angle with
/// `g₊(x) = √x` and `g₋(x) = 1/√x`.
///
/// The bare → polariton matrix is
/// `[[cos θ Ū₁, -sin θ Ū₂], [sin θ Ū₃, cos θ Ū₄]]` with
/// `Ū₁ = diag(g₊, g₋)(ω_U/ω_a)`, `Ū₂ = diag(g₊, g₋)(ω_U/ω_b)`,
/// `Ū₃ = diag(g₊, g₋)(ω_L/ω_a)`, `Ū₄ = diag(g₊, g₋)(ω_L/ω_b)`;
/// the stored polariton → bare map is its symplectic inverse.
pub fn build_transform_u(params: &ModelParams, basis: &PolaritonBasis) -> Result<BasisTransform> {
    params.lambda()?;
    let theta = basis
        .theta()
        .ok_or_else(|| Error::Precondition("basis carries no mixing angle".into()))?;
    let (s, c) = theta.sin_cos();
    let (wu, wl) = (basis.omega_upper(), basis.omega_lower());
    let (wa, wb) = (params.omega_a(), params.omega_b());
    let (ua, ub) = ((wu / wa).sqrt(), (wu / wb).sqrt());
    let (la, lb) = ((wl / wa).sqrt(), (wl / wb).sqrt());
    #[rustfmt::skip]
    let u_bar = Matrix4::new(
        c * ua, 0.0,    -s * ub, 0.0,
        0.0,    c / ua, 0.0,     -s / ub,
        s * la, 0.0,    c * lb,  0.0,
        0.0,    s / la, 0.0,     c / lb,
    );
    Ok(BasisTransform {
        entries: symplectic_inverse(&u_bar),
    })
}

/// Thermal polariton state `diag(a₁, a₁, b₁, b₁)` with `a₁ = (1 + 2N(ω_U))/2`
/// and `b₁ = (1 + 2N(ω_L))/2`.
pub fn polariton_thermal_covariance(basis: &PolaritonBasis, temperature: f64) -> CovarianceMatrix {
    let a1 = coth_half(basis.omega_upper(), temperature) / 2.0;
    let b1 = coth_half(basis.omega_lower(), temperature) / 2.0;
    CovarianceMatrix::new(
        Matrix4::from_diagonal(&Vector4::new(a1, a1, b1, b1)),
        QuadratureBasis::Polariton,
    )
}

/// Polariton state with arbitrary occupations of the two branches.
pub fn polariton_covariance_from_occupations(occ_upper: f64, occ_lower: f64) -> CovarianceMatrix {
    let (a1, b1) = (occ_upper + 0.5, occ_lower + 0.5);
    CovarianceMatrix::new(
        Matrix4::from_diagonal(&Vector4::new(a1, a1, b1, b1)),
        QuadratureBasis::Polariton,
    )
}

/// `Γ_o = S Γ_p Sᵀ` with `S` the polariton → bare map.
///
/// For `Γ_p = diag(a₁, a₁, b₁, b₁)` and `λ₁ = λ₂` the blocks are diagonal:
/// `A = diag(ω_a(a₁cos²θ/ω_U + b₁sin²θ/ω_L), (a₁ω_U cos²θ + b₁ω_L sin²θ)/ω_a)`,
/// `B = diag(ω_b(a₁sin²θ/ω_U + b₁cos²θ/ω_L), (a₁ω_U sin²θ + b₁ω_L cos²θ)/ω_b)` and
/// `C = cos θ sin θ · diag(√(ω_aω_b)(b₁/ω_L - a₁/ω_U), (ω_L b₁ - ω_U a₁)/√(ω_aω_b))`.
pub fn to_bare_basis(
    gamma_p: &CovarianceMatrix,
    transform: &BasisTransform,
) -> Result<CovarianceMatrix> {
    gamma_p.require_basis(QuadratureBasis::Polariton)?;
    let s = transform.entries();
    Ok(CovarianceMatrix::new(
        s * gamma_p.entries() * s.transpose(),
        QuadratureBasis::Bare,
    ))
}

/// Ground state `S Sᵀ/2` of any stable basis.
pub fn ground_state_covariance_generic(basis: &PolaritonBasis) -> CovarianceMatrix {
    let s = basis.quadrature_map();
    CovarianceMatrix::new(s * s.transpose() * 0.5, QuadratureBasis::Bare)
}

/// Thermal state of any stable basis, through the polariton representation.
pub fn thermal_covariance_generic(basis: &PolaritonBasis, temperature: f64) -> CovarianceMatrix {
    let s = basis.quadrature_map();
    let gp = polariton_thermal_covariance(basis, temperature);
    CovarianceMatrix::new(s * gp.entries() * s.transpose(), QuadratureBasis::Bare)
}

/// Closed-form ground state of the Hopfield model with `D = λ²/ω_b`.
///
/// With `Σ = ω_L + ω_U`: `⟨x_a²⟩ = ⟨p_b²⟩ = (ω_a + ω_b)/2Σ`,
/// `⟨p_a²⟩ = ⟨x_b²⟩ = (ω_a + 4D + ω_b)/2Σ`, `⟨x_a x_b⟩ = -λ/Σ`,
/// `⟨p_a p_b⟩ = λ/Σ`. Other diamagnetic strengths break the
/// `ω_U ω_L = ω_a ω_b` identity these entries rely on.
pub fn ground_state_covariance_closed(params: &ModelParams) -> Result<CovarianceMatrix> {
    let lambda = params.require_natural_diamag()?;
    let (wu, wl) = polariton_frequencies_analytic(params)?;
    let (wa, wb, d) = (params.omega_a(), params.omega_b(), params.diamag());
    let sum = wu + wl;
    let xx = (wa + wb) / (2.0 * sum);
    let pp = (wa + 4.0 * d + wb) / (2.0 * sum);
    let cx = -lambda / sum;
    let cp = lambda / sum;
    #[rustfmt::skip]
    let g = Matrix4::new(
        xx,  0.0, cx,  0.0,
        0.0, pp,  0.0, cp,
        cx,  0.0, pp,  0.0,
        0.0, cp,  0.0, xx,
    );
    Ok(CovarianceMatrix::new(g, QuadratureBasis::Bare))
}

/// Closed-form thermal steady state for `λ₁ = λ₂` and any `D`, written with
/// `c_j = coth(ω_j/2T)`.
pub fn thermal_covariance_closed(
    params: &ModelParams,
    temperature: f64,
) -> Result<CovarianceMatrix> {
    let lambda = params.lambda()?;
    let (wu, wl) = polariton_frequencies_analytic(params)?;
    if wu - wl < crate::basis::DEGENERACY_TOL {
        return Err(Error::DegenerateSpectrum { gap: wu - wl });
    }
    let (wa, wb) = (params.omega_a(), params.omega_b());
    let (cu, cl) = (coth_half(wu, temperature), coth_half(wl, temperature));
    let (wb2, wl2, wu2) = (wb * wb, wl * wl, wu * wu);
    let split = wl2 - wu2;
    let g11 = wa * (cl * wu * (wl2 - wb2) - cu * wl * (wu2 - wb2)) / (2.0 * wl * wu * split);
    let g22 = (cl * wl * (wl2 - wb2) - cu * wu * (wu2 - wb2)) / (2.0 * wa * split);
    let g33 = wb * (cu * wl * (wl2 - wb2) - cl * wu * (wu2 - wb2)) / (2.0 * wl * wu * split);
    let g44 = (cu * wu * (wl2 - wb2) - cl * wl * (wu2 - wb2)) / (2.0 * wb * split);
    let g13 = lambda * wa * wb * (cl * wu - cu * wl) / (wl * wu * split);
    let g24 = lambda * (cl * wl - cu * wu) / split;
    #[rustfmt::skip]
    let g = Matrix4::new(
        g11, 0.0, g13, 0.0,
        0.0, g22, 0.0, g24,
        g13, 0.0, g33, 0.0,
        0.0, g24, 0.0, g44,
    );
    Ok(CovarianceMatrix::new(g, QuadratureBasis::Bare))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{diagonalize, hopfield_coefficients};
    use crate::symplectic::symplectic_defect;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn printed_transform_is_inverse_of_coefficient_map() {
        for p in [
            ModelParams::hopfield(1.0, 1.0, 0.5).unwrap(),
            ModelParams::hopfield(0.4, 1.0, 0.9).unwrap(),
            ModelParams::no_a2(2.0, 1.0, 0.3).unwrap(),
        ] {
            let b = hopfield_coefficients(&p).unwrap();
            let u = build_transform_u(&p, &b).unwrap();
            assert!(symplectic_defect(u.entries()) < 1e-10);
            assert!(symplectic_defect(&u.bare_to_polariton()) < 1e-10);
            assert!((u.entries() - b.quadrature_map()).abs().max() < 1e-9);
        }
    }

    #[test]
    fn transform_near_decoupling_is_identity() {
        let p = ModelParams::hopfield(1.5, 1.0, 1e-9).unwrap();
        let b = hopfield_coefficients(&p).unwrap();
        let u = build_transform_u(&p, &b).unwrap();
        assert!((u.entries() - Matrix4::identity()).abs().max() < 1e-8);
    }

    #[test]
    fn polariton_thermal_state() {
        let b = hopfield_coefficients(&ModelParams::hopfield(1.0, 1.0, 0.5).unwrap()).unwrap();
        let g = polariton_thermal_covariance(&b, 0.0);
        assert_eq!(*g.entries(), Matrix4::identity() * 0.5);
        let g = polariton_thermal_covariance(&b, 0.15);
        assert!(g.get(2, 2) > g.get(0, 0));
        assert_relative_eq!(
            g.get(0, 0),
            0.5 + crate::thermal::thermal_occupation(b.omega_upper(), 0.15)
        );
    }

    #[test]
    fn block_formulas_match_transform() {
        let p = ModelParams::hopfield(1.3, 1.0, 0.6).unwrap();
        let b = hopfield_coefficients(&p).unwrap();
        let t = 0.3;
        let gp = polariton_thermal_covariance(&b, t);
        let go = to_bare_basis(&gp, &build_transform_u(&p, &b).unwrap()).unwrap();
        let (a1, b1) = (gp.get(0, 0), gp.get(2, 2));
        let th = b.theta().unwrap();
        let (s2, c2) = (th.sin().powi(2), th.cos().powi(2));
        let (wu, wl, wa, wb) = (b.omega_upper(), b.omega_lower(), 1.3, 1.0);
        assert_relative_eq!(
            go.get(0, 0),
            wa * (a1 * c2 / wu + b1 * s2 / wl),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            go.get(1, 1),
            (a1 * c2 * wu + b1 * s2 * wl) / wa,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            go.get(2, 2),
            wb * (a1 * s2 / wu + b1 * c2 / wl),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            go.get(3, 3),
            (a1 * s2 * wu + b1 * c2 * wl) / wb,
            epsilon = 1e-12
        );
        let cs = th.cos() * th.sin();
        let root = (wa * wb).sqrt();
        assert_relative_eq!(
            go.get(0, 2),
            cs * root * (b1 / wl - a1 / wu),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            go.get(1, 3),
            cs * (wl * b1 - wu * a1) / root,
            epsilon = 1e-12
        );
    }

    #[test]
    fn basis_tag_is_checked() {
        let b = hopfield_coefficients(&ModelParams::hopfield(1.0, 1.0, 0.5).unwrap()).unwrap();
        let bare = CovarianceMatrix::vacuum(QuadratureBasis::Bare);
        let err = to_bare_basis(&bare, &BasisTransform::from_basis(&b)).unwrap_err();
        assert_eq!(
            err,
            Error::BasisMismatch {
                expected: QuadratureBasis::Polariton,
                found: QuadratureBasis::Bare
            }
        );
    }

    #[test]
    fn ground_state_closed_reference_entry() {
        let g =
            ground_state_covariance_closed(&ModelParams::hopfield(1.0, 1.0, 0.5).unwrap()).unwrap();
        assert_relative_eq!(g.get(0, 2), -0.223_606_797_749_979, epsilon = 1e-12);
        assert!(g.is_physical());
        let g =
            ground_state_covariance_closed(&ModelParams::hopfield(1.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!(*g.entries(), Matrix4::identity() * 0.5);
        assert!(
            ground_state_covariance_closed(&ModelParams::no_a2(1.0, 1.0, 0.3).unwrap()).is_err()
        );
    }

    #[test]
    fn mixing_only_ground_state_is_vacuum() {
        let p = ModelParams::new(1.0, 1.0, 0.3, 0.0, 0.0).unwrap();
        let g = ground_state_covariance_generic(&diagonalize(&p).unwrap());
        assert!((g.entries() - Matrix4::identity() * 0.5).abs().max() < 1e-14);
    }

    #[test]
    fn squeezing_only_ground_state_is_correlated() {
        let p = ModelParams::new(1.0, 1.0, 0.0, 0.3, 0.0).unwrap();
        let g = ground_state_covariance_generic(&diagonalize(&p).unwrap());
        assert!(g.get(0, 2).abs() > 1e-3);
        assert!(g.is_physical());
    }

    #[test]
    fn thermal_closed_low_temperature_limit() {
        let p = ModelParams::hopfield(0.7, 1.0, 0.45).unwrap();
        let g0 = ground_state_covariance_closed(&p).unwrap();
        let gt = thermal_covariance_closed(&p, 1e-8).unwrap();
        assert!(g0.max_abs_diff(&gt) < 1e-10);
    }

    #[test]
    fn thermal_closed_is_physical() {
        let g = thermal_covariance_closed(&ModelParams::hopfield(0.5, 1.0, 0.25).unwrap(), 0.2)
            .unwrap();
        g.check_physical().unwrap();
    }

    #[test]
    fn text_round_trip_and_errors() {
        let g = thermal_covariance_closed(&ModelParams::hopfield(1.0, 1.0, 0.5).unwrap(), 0.15)
            .unwrap();
        let text = g.to_string();
        assert!(text.starts_with("basis=bare\n"));
        let back: CovarianceMatrix = text.parse().unwrap();
        assert_eq!(back, g);
        assert!("basis=weird\n1 0 0 0".parse::<CovarianceMatrix>().is_err());
        assert!("basis=bare\n1 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1"
            .parse::<CovarianceMatrix>()
            .is_err());
        assert!("1 0 0 0".parse::<CovarianceMatrix>().is_err());
    }

    proptest! {
        #[test]
        fn two_routes_agree(wa in 0.1f64..3.0, lambda in 0.02f64..1.2, dscale in 0.0f64..2.0, t in 0.0f64..1.0) {
            let p = ModelParams::new(wa, 1.0, lambda, lambda, dscale * lambda * lambda).unwrap();
            let Ok(b) = hopfield_coefficients(&p) else { return Ok(()); };
            let closed = thermal_covariance_closed(&p, t).unwrap();
            let via_u = to_bare_basis(&polariton_thermal_covariance(&b, t), &build_transform_u(&p, &b).unwrap()).unwrap();
            prop_assert!(closed.max_abs_diff(&via_u) < 1e-9 * closed.entries().abs().max().max(1.0));
            prop_assert!(closed.is_physical());
        }

        #[test]
        fn closed_ground_state_matches_generic(wa in 0.1f64..3.0, lambda in 0.0f64..1.5) {
            let p = ModelParams::hopfield(wa, 1.0, lambda).unwrap();
            let closed = ground_state_covariance_closed(&p).unwrap();
            let generic = ground_state_covariance_generic(&diagonalize(&p).unwrap());
            prop_assert!(closed.max_abs_diff(&generic) < 1e-10);
        }

        #[test]
        fn text_format_round_trips(vals in proptest::collection::vec(-1e6f64..1e6, 16), bare in any::<bool>()) {
            let m = Matrix4::from_iterator(vals);
            let basis = if bare { QuadratureBasis::Bare } else { QuadratureBasis::Polariton };
            let g = CovarianceMatrix::new(m, basis);
            let back: CovarianceMatrix = g.to_string().parse().unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
