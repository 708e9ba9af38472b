//! Model parameters of the two-mode light–matter Hamiltonian
//!
//! ```text
//! H = (ω_a + 2D) a†a + ω_b b†b + λ₁ (a†b + ab†) + λ₂ (a†b† + ab) + D (a†² + a²)
//! ```
//!
//! and its Hopfield–Bogoliubov dynamical matrix. All frequencies are in units
//! of the matter frequency when `omega_b = 1`; ħ = k_B = 1 throughout.

use nalgebra::Matrix4;

use crate::error::{Error, Result};

/// Parameters of the bilinear Hamiltonian.
///
/// `lambda1` is the mode-mixing (beam-splitter) coupling, `lambda2` the
/// mode-squeezing coupling and `diamag` the coefficient `D` of the
/// diamagnetic `(a + a†)²` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega_a: f64,
    omega_b: f64,
    lambda1: f64,
    lambda2: f64,
    diamag: f64,
}

impl ModelParams {
    pub fn new(
        omega_a: f64,
        omega_b: f64,
        lambda1: f64,
        lambda2: f64,
        diamag: f64,
    ) -> Result<Self> {
        let finite = [omega_a, omega_b, lambda1, lambda2, diamag]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if omega_a <= 0.0 || omega_b <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "frequencies must be positive (omega_a = {omega_a}, omega_b = {omega_b})"
            )));
        }
        if lambda1 < 0.0 || lambda2 < 0.0 || diamag < 0.0 {
            return Err(Error::InvalidParams(format!(
                "couplings must be non-negative (lambda1 = {lambda1}, lambda2 = {lambda2}, D = {diamag})"
            )));
        }
        Ok(Self {
            omega_a,
            omega_b,
            lambda1,
            lambda2,
            diamag,
        })
    }

    /// Hopfield model with the diamagnetic term fixed by `D = λ²/ω_b`.
    pub fn hopfield(omega_a: f64, omega_b: f64, lambda: f64) -> Result<Self> {
        Self::new(omega_a, omega_b, lambda, lambda, lambda * lambda / omega_b)
    }

    /// Hopfield model without the A² term (`D = 0`).
    pub fn no_a2(omega_a: f64, omega_b: f64, lambda: f64) -> Result<Self> {
        Self::new(omega_a, omega_b, lambda, lambda, 0.0)
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn diamag(&self) -> f64 {
        self.diamag
    }

    /// Equal mixing and squeezing couplings, `λ₁ = λ₂`.
    pub fn is_hopfield_family(&self) -> bool {
        self.lambda1 == self.lambda2
    }

    /// Common coupling `λ` of a Hopfield-family model.
    pub fn lambda(&self) -> Result<f64> {
        if self.is_hopfield_family() {
            Ok(self.lambda1)
        } else {
            Err(Error::Precondition(format!(
                "closed forms need lambda1 == lambda2 (got {} and {})",
                self.lambda1, self.lambda2
            )))
        }
    }

    /// True when `D = λ²/ω_b` (to 1e-12 relative) and `λ₁ = λ₂`.
    pub fn has_natural_diamag(&self) -> bool {
        let expected = self.lambda1 * self.lambda1 / self.omega_b;
        self.is_hopfield_family()
            && (self.diamag - expected).abs() <= 1e-12 * expected.max(1e-300).max(self.diamag)
    }

    pub(crate) fn require_natural_diamag(&self) -> Result<f64> {
        let lambda = self.lambda()?;
        if !self.has_natural_diamag() {
            return Err(Error::Precondition(format!(
                "closed form needs D = lambda^2/omega_b (D = {}, lambda^2/omega_b = {})",
                self.diamag,
                lambda * lambda / self.omega_b
            )));
        }
        Ok(lambda)
    }

    pub(crate) fn is_resonant(&self) -> bool {
        (self.omega_a - self.omega_b).abs() <= 1e-12 * self.omega_b
    }
}

/// Critical coupling `λ_C = √(ω_a ω_b)/2` of the model without the A² term.
pub fn critical_coupling(omega_a: f64, omega_b: f64) -> Result<f64> {
    if !(omega_a > 0.0 && omega_b > 0.0) {
        return Err(Error::InvalidParams(format!(
            "critical coupling needs positive frequencies (omega_a = {omega_a}, omega_b = {omega_b})"
        )));
    }
    Ok((omega_a * omega_b).sqrt() / 2.0)
}

/// Squared polariton frequencies `(ω_U², ω_L²)` of a Hopfield-family model.
/// `ω_L²` may be non-positive; callers decide what that means.
pub(crate) fn squared_frequencies(params: &ModelParams) -> Result<(f64, f64)> {
    let lambda = params.lambda()?;
    let (wa, wb, d) = (params.omega_a, params.omega_b, params.diamag);
    let mean = (wa * wa + 4.0 * d * wa + wb * wb) / 2.0;
    let half_split = (wa * wa + 4.0 * d * wa - wb * wb) / 2.0;
    let radius = (half_split * half_split + 4.0 * lambda * lambda * wa * wb).sqrt();
    let upper = mean + radius;
    // product form avoids cancellation in mean - radius
    let det = wa * wa * wb * wb + 4.0 * d * wa * wb * wb - 4.0 * lambda * lambda * wa * wb;
    let lower = if mean - radius > 0.5 * mean {
        mean - radius
    } else {
        det / upper
    };
    Ok((upper, lower))
}

/// Closed-form polariton frequencies `(ω_U, ω_L)` for `λ₁ = λ₂`.
pub fn polariton_frequencies_analytic(params: &ModelParams) -> Result<(f64, f64)> {
    let (upper_sq, lower_sq) = squared_frequencies(params)?;
    if lower_sq <= 0.0 {
        return Err(Error::Instability(format!(
            "omega_L^2 = {lower_sq:e} <= 0 (lambda = {}, D = {})",
            params.lambda1, params.diamag
        )));
    }
    Ok((upper_sq.sqrt(), lower_sq.sqrt()))
}

/// Hopfield–Bogoliubov dynamical matrix acting on `(a, b, a†, b†)`.
///
/// Row `i` holds the coefficients of `[v_i, H]` expanded in the same operator
/// vector, so a polariton `p = w a + x b + y a† + z b†` with `[p, H] = ω p` is
/// an eigenvector of the transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicalMatrix {
    entries: Matrix4<f64>,
    params: ModelParams,
}

impl DynamicalMatrix {
    pub fn entries(&self) -> &Matrix4<f64> {
        &self.entries
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// The symmetric matrix `𝐇 = η Mᵀ` with `η = diag(1, 1, -1, -1)`.
    /// The spectrum is stable exactly when `𝐇` is positive definite.
    pub fn hamiltonian_matrix(&self) -> Matrix4<f64> {
        let eta = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, -1.0, -1.0));
        eta * self.entries.transpose()
    }
}

pub fn build_dynamical_matrix(params: &ModelParams) -> DynamicalMatrix {
    let (wa, wb) = (params.omega_a, params.omega_b);
    let (mix, sq, d) = (params.lambda1, params.lambda2, params.diamag);
    let a = wa + 2.0 * d;
    #[rustfmt::skip]
    let entries = Matrix4::new(
         a,    mix,  2.0 * d,  sq,
         mix,  wb,   sq,       0.0,
        -2.0 * d, -sq, -a,     -mix,
        -sq,   0.0, -mix,     -wb,
    );
    DynamicalMatrix {
        entries,
        params: *params,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constructors_set_diamagnetic_term() {
        let p = ModelParams::hopfield(1.0, 2.0, 0.4).unwrap();
        assert_eq!(p.lambda1(), 0.4);
        assert_eq!(p.lambda2(), 0.4);
        assert_relative_eq!(p.diamag(), 0.08, epsilon = 1e-15);
        assert!(p.has_natural_diamag());
        let q = ModelParams::no_a2(1.0, 2.0, 0.4).unwrap();
        assert_eq!(q.diamag(), 0.0);
        assert!(!q.has_natural_diamag());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(ModelParams::new(0.0, 1.0, 0.1, 0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 0.1, 0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, -0.1, 0.1, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 0.1, 0.1, -1.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 0.1, 0.1, 0.0).is_err());
    }

    #[test]
    fn decoupled_matrix_is_diagonal() {
        let m = build_dynamical_matrix(&ModelParams::hopfield(1.0, 1.0, 0.0).unwrap());
        assert_eq!(
            *m.entries(),
            Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, -1.0, -1.0))
        );
    }

    #[test]
    fn hopfield_matrix_entries() {
        let m = build_dynamical_matrix(&ModelParams::hopfield(1.0, 1.0, 0.5).unwrap());
        let e = m.entries();
        assert_relative_eq!(e[(0, 0)], 1.5);
        assert_relative_eq!(e[(0, 2)], 0.5);
        assert_relative_eq!(e[(0, 1)], 0.5);
        assert_relative_eq!(e[(0, 3)], 0.5);
        assert_relative_eq!(e[(2, 2)], -1.5);
        assert_relative_eq!(e[(3, 3)], -1.0);
    }

    #[test]
    fn mixing_only_has_no_squeezing_entries() {
        // [a, H] = (ω_a+2D) a + λ₁ b + 2D a† + λ₂ b†, [b, H] = λ₁ a + ω_b b + λ₂ a†
        let p = ModelParams::new(1.0, 1.0, 0.3, 0.0, 0.0).unwrap();
        let e = *build_dynamical_matrix(&p).entries();
        assert_eq!(e[(0, 3)], 0.0);
        assert_eq!(e[(1, 2)], 0.0);
        assert_eq!(e[(0, 1)], 0.3);
        assert_eq!(e[(1, 0)], 0.3);
    }

    #[test]
    fn bogoliubov_symmetry() {
        let p = ModelParams::new(1.3, 0.7, 0.2, 0.45, 0.1).unwrap();
        let m = *build_dynamical_matrix(&p).entries();
        let mut k = Matrix4::zeros();
        k[(0, 2)] = 1.0;
        k[(1, 3)] = 1.0;
        k[(2, 0)] = 1.0;
        k[(3, 1)] = 1.0;
        assert_eq!(m, -(k * m * k));
        let h = build_dynamical_matrix(&p).hamiltonian_matrix();
        assert_eq!(h, h.transpose());
    }

    #[test]
    fn critical_coupling_values() {
        assert_eq!(critical_coupling(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(critical_coupling(4.0, 1.0).unwrap(), 1.0);
        assert!(critical_coupling(1.0, 0.0).is_err());
    }

    #[test]
    fn analytic_frequencies() {
        let (u, l) =
            polariton_frequencies_analytic(&ModelParams::hopfield(1.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!((u, l), (1.0, 1.0));
        let (u, l) =
            polariton_frequencies_analytic(&ModelParams::hopfield(1.0, 1.0, 0.5).unwrap()).unwrap();
        assert_relative_eq!(u, 1.618_033_988_749_895, epsilon = 1e-14);
        assert_relative_eq!(l, 0.618_033_988_749_895, epsilon = 1e-14);
        assert_relative_eq!(u * l, 1.0, epsilon = 1e-14);
        let err = polariton_frequencies_analytic(&ModelParams::no_a2(1.0, 1.0, 0.5).unwrap());
        assert!(matches!(err, Err(Error::Instability(_))));
    }

    #[test]
    fn analytic_frequencies_need_equal_couplings() {
        let p = ModelParams::new(1.0, 1.0, 0.3, 0.0, 0.0).unwrap();
        assert!(matches!(
            polariton_frequencies_analytic(&p),
            Err(Error::Precondition(_))
        ));
    }
}
