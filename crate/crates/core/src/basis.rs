//! Polariton normal modes.
//!
//! A polariton operator is `p = w a + x b + y a† + z b†` with real
//! coefficients. Two routes are provided: the closed form valid for equal
//! mixing and squeezing couplings, and a numeric Bogoliubov diagonalization
//! of the dynamical matrix that covers the general bilinear family.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};

use crate::error::{Error, Result};
use crate::model::{build_dynamical_matrix, squared_frequencies, DynamicalMatrix, ModelParams};

/// Gap below which two polariton frequencies count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Relative size of an imaginary eigenvalue part that signals instability.
pub const INSTABILITY_TOL: f64 = 1e-10;

/// Upper/lower polariton frequencies, mixing angle and coefficients
/// `(w, x, y, z)` of each branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonBasis {
    omega_upper: f64,
    omega_lower: f64,
    theta: Option<f64>,
    coeffs_upper: [f64; 4],
    coeffs_lower: [f64; 4],
}

/// Bogoliubov inner product `w w' + x x' - y y' - z z'`.
pub fn bogoliubov_product(c: &[f64; 4], d: &[f64; 4]) -> f64 {
    c[0] * d[0] + c[1] * d[1] - c[2] * d[2] - c[3] * d[3]
}

impl PolaritonBasis {
    pub fn omega_upper(&self) -> f64 {
        self.omega_upper
    }

    pub fn omega_lower(&self) -> f64 {
        self.omega_lower
    }

    /// Mixing angle in `(-π/2, 0]`; only defined when `λ₁ = λ₂`.
    pub fn theta(&self) -> Option<f64> {
        self.theta
    }

    pub fn coeffs_upper(&self) -> [f64; 4] {
        self.coeffs_upper
    }

    pub fn coeffs_lower(&self) -> [f64; 4] {
        self.coeffs_lower
    }

    /// Coefficients indexed by branch, upper first.
    pub fn branches(&self) -> [([f64; 4], f64); 2] {
        [
            (self.coeffs_upper, self.omega_upper),
            (self.coeffs_lower, self.omega_lower),
        ]
    }

    pub fn gap(&self) -> f64 {
        self.omega_upper - self.omega_lower
    }

    /// Largest violation of the commutator relations `[p_i, p_j†] = δ_ij`
    /// and `[p_i, p_j] = 0`.
    pub fn commutator_defect(&self) -> f64 {
        let (u, l) = (&self.coeffs_upper, &self.coeffs_lower);
        // [p_i, p_j] = w_i y_j + x_i z_j - y_i w_j - z_i x_j
        let anti = u[0] * l[2] + u[1] * l[3] - u[2] * l[0] - u[3] * l[1];
        [
            (bogoliubov_product(u, u) - 1.0).abs(),
            (bogoliubov_product(l, l) - 1.0).abs(),
            bogoliubov_product(u, l).abs(),
            anti.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Symplectic map from polariton quadratures `(d_U, f_U, d_L, f_L)` to
    /// bare quadratures `(x_a, p_a, x_b, p_b)`, with `x = (o + o†)/√2` and
    /// `p = (o - o†)/(i√2)`.
    ///
    /// Inverting the Bogoliubov transformation gives
    /// `a = Σ_j (w_j p_j - y_j p_j†)` and `b = Σ_j (x_j p_j - z_j p_j†)`.
    pub fn quadrature_map(&self) -> Matrix4<f64> {
        let (u, l) = (&self.coeffs_upper, &self.coeffs_lower);
        #[rustfmt::skip]
        let s = Matrix4::new(
            u[0] - u[2], 0.0,         l[0] - l[2], 0.0,
            0.0,         u[0] + u[2], 0.0,         l[0] + l[2],
            u[1] - u[3], 0.0,         l[1] - l[3], 0.0,
            0.0,         u[1] + u[3], 0.0,         l[1] + l[3],
        );
        s
    }

    /// Builds a basis from raw parts, checking the frequency ordering and the
    /// commutator relations to `tol`.
    pub fn from_parts(
        omega_upper: f64,
        omega_lower: f64,
        theta: Option<f64>,
        coeffs_upper: [f64; 4],
        coeffs_lower: [f64; 4],
        tol: f64,
    ) -> Result<Self> {
        if !(omega_lower > 0.0 && omega_upper >= omega_lower) {
            return Err(Error::InvalidParams(format!(
                "need omega_U >= omega_L > 0 (got {omega_upper}, {omega_lower})"
            )));
        }
        let basis = Self {
            omega_upper,
            omega_lower,
            theta,
            coeffs_upper,
            coeffs_lower,
        };
        let defect = basis.commutator_defect();
        if !(defect <= tol) {
            return Err(Error::InvalidParams(format!(
                "coefficients violate bosonic commutators by {defect:e}"
            )));
        }
        Ok(basis)
    }
}

fn f_plus(x: f64) -> f64 {
    (x.sqrt() + 1.0 / x.sqrt()) / 2.0
}

fn f_minus(x: f64) -> f64 {
    (x.sqrt() - 1.0 / x.sqrt()) / 2.0
}

/// Mixing angle from `cos 2θ = (ω_a² + 4Dω_a - ω_b²)/(ω_U² - ω_L²)` and
/// `sin 2θ = -4λ√(ω_a ω_b)/(ω_U² - ω_L²)`, folded into `(-π/2, 0]`.
pub fn mixing_angle(params: &ModelParams, omega_upper: f64, omega_lower: f64) -> Result<f64> {
    let lambda = params.lambda()?;
    let (wa, wb, d) = (params.omega_a(), params.omega_b(), params.diamag());
    let split = omega_upper * omega_upper - omega_lower * omega_lower;
    let cos2 = (wa * wa + 4.0 * d * wa - wb * wb) / split;
    let sin2 = -4.0 * lambda * (wa * wb).sqrt() / split;
    let theta = sin2.atan2(cos2) / 2.0;
    // atan2 returns +π for sin 2θ = +0 and cos 2θ < 0
    Ok(if theta > 0.0 {
        theta - std::f64::consts::PI
    } else {
        theta
    })
}

/// Closed-form polariton basis for `λ₁ = λ₂`, valid for any `D ≥ 0`.
///
/// The upper branch is `(cos θ f₊(ω_U/ω_a), -sin θ f₊(ω_U/ω_b), cos θ f₋(ω_U/ω_a), -sin θ f₋(ω_U/ω_b))`
/// and the lower branch `(sin θ f₊(ω_L/ω_a), cos θ f₊(ω_L/ω_b), sin θ f₋(ω_L/ω_a), cos θ f₋(ω_L/ω_b))`,
/// with `f_±(x) = (√x ± 1/√x)/2`. Since `θ ≤ 0` the lower branch has `w_L ≤ 0`.
pub fn hopfield_coefficients(params: &ModelParams) -> Result<PolaritonBasis> {
    params.lambda()?;
    let (upper_sq, lower_sq) = squared_frequencies(params)?;
    if lower_sq <= 0.0 {
        return Err(Error::Instability(format!("omega_L^2 = {lower_sq:e} <= 0")));
    }
    let (wu, wl) = (upper_sq.sqrt(), lower_sq.sqrt());
    if wu - wl < DEGENERACY_TOL {
        return Err(Error::DegenerateSpectrum { gap: wu - wl });
    }
    let theta = mixing_angle(params, wu, wl)?;
    let (s, c) = theta.sin_cos();
    let (wa, wb) = (params.omega_a(), params.omega_b());
    let upper = [
        c * f_plus(wu / wa),
        -s * f_plus(wu / wb),
        c * f_minus(wu / wa),
        -s * f_minus(wu / wb),
    ];
    let lower = [
        s * f_plus(wl / wa),
        c * f_plus(wl / wb),
        s * f_minus(wl / wa),
        c * f_minus(wl / wb),
    ];
    Ok(PolaritonBasis {
        omega_upper: wu,
        omega_lower: wl,
        theta: Some(theta),
        coeffs_upper: upper,
        coeffs_lower: lower,
    })
}

fn fix_sign(mut c: [f64; 4]) -> [f64; 4] {
    let pivot = if c[0].abs() > 1e-12 {
        c[0]
    } else {
        *c.iter().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap()
    };
    if pivot < 0.0 {
        c.iter_mut().for_each(|v| *v = -*v);
    }
    c
}

fn check_real_spectrum(m: &DynamicalMatrix) -> Result<()> {
    let scale = m.params().omega_b();
    for ev in m.entries().complex_eigenvalues().iter() {
        if ev.im.abs() > INSTABILITY_TOL * scale {
            return Err(Error::Instability(format!(
                "complex eigenvalue {:.6e} {:+.6e}i",
                ev.re, ev.im
            )));
        }
    }
    Ok(())
}

/// Numeric normal modes of a dynamical matrix, tolerating degenerate
/// frequencies.
///
/// The symmetric matrix `𝐇 = η Mᵀ` is Cholesky-factored as `L Lᵀ`; the
/// positive eigenvalues of `Lᵀ η L` are the polariton frequencies and each
/// eigenvector `u` yields the coefficient vector `L⁻ᵀ u √ω / |u|`, which has
/// unit Bogoliubov norm. Within a degenerate pair the split between the two
/// returned modes is arbitrary but still canonical.
pub fn normal_modes(m: &DynamicalMatrix) -> Result<PolaritonBasis> {
    check_real_spectrum(m)?;
    let h = m.hamiltonian_matrix();
    let chol = h
        .cholesky()
        .ok_or_else(|| Error::Instability("Hamiltonian matrix is not positive definite".into()))?;
    let l = chol.l();
    let eta = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0));
    let k = l.transpose() * eta * l;
    let eig = SymmetricEigen::new((k + k.transpose()) * 0.5);
    let l_inv_t = l
        .transpose()
        .try_inverse()
        .ok_or_else(|| Error::Instability("singular Cholesky factor".into()))?;

    let mut modes: Vec<(f64, [f64; 4])> = (0..4)
        .filter(|&i| eig.eigenvalues[i] > 0.0)
        .map(|i| {
            let omega = eig.eigenvalues[i];
            let u = eig.eigenvectors.column(i);
            let v = l_inv_t * u * (omega.sqrt() / u.norm());
            (omega, fix_sign([v[0], v[1], v[2], v[3]]))
        })
        .collect();
    if modes.len() != 2 {
        return Err(Error::Instability(format!(
            "expected two positive-norm modes, found {}",
            modes.len()
        )));
    }
    modes.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (wu, cu) = modes[0];
    let (wl, cl) = modes[1];
    let p = m.params();
    let theta = if p.is_hopfield_family() && wu - wl >= DEGENERACY_TOL {
        let sin = -(cu[1] - cu[3]) * (wu / p.omega_b()).sqrt();
        let cos = (cu[0] - cu[2]) * (wu / p.omega_a()).sqrt();
        Some(sin.atan2(cos))
    } else {
        None
    };
    Ok(PolaritonBasis {
        omega_upper: wu,
        omega_lower: wl,
        theta,
        coeffs_upper: cu,
        coeffs_lower: cl,
    })
}

/// Numeric Bogoliubov diagonalization of the dynamical matrix.
///
/// Coefficients are real with `w_j > 0` (or the largest entry positive when
/// `w_j` vanishes); the larger frequency is labelled upper.
pub fn bogoliubov_diagonalize_numeric(m: &DynamicalMatrix) -> Result<PolaritonBasis> {
    let basis = normal_modes(m)?;
    if basis.gap() < DEGENERACY_TOL {
        return Err(Error::DegenerateSpectrum { gap: basis.gap() });
    }
    Ok(basis)
}

/// Numeric normal modes straight from parameters.
pub fn diagonalize(params: &ModelParams) -> Result<PolaritonBasis> {
    normal_modes(&build_dynamical_matrix(params))
}
