//! Symplectic form and symplectic eigenvalues of two-mode covariance matrices,
//! ordered as `(x_1, p_1, x_2, p_2)`.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};

/// Block-diagonal symplectic form `Ω = ⊕ [[0, 1], [-1, 0]]`.
pub fn omega() -> Matrix4<f64> {
    #[rustfmt::skip]
    let w = Matrix4::new(
         0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
         0.0, 0.0, 0.0, 1.0,
         0.0, 0.0, -1.0, 0.0,
    );
    w
}

/// Momentum flip of the second mode, the phase-space image of partial
/// transposition.
pub fn partial_transpose(gamma: &Matrix4<f64>) -> Matrix4<f64> {
    let p = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0));
    p * gamma * p
}

/// Symplectic eigenvalues `(ν₋, ν₊)` of a positive-definite matrix, i.e. the
/// moduli of the eigenvalues of `iΩΓ`.
///
/// `A = Γ^{1/2} Ω Γ^{1/2}` is antisymmetric with eigenvalues `±iν`, so its
/// singular values are the `ν`, each appearing twice. Taking them directly
/// (rather than square roots of the spectrum of `-A²`) keeps `ν₋` accurate
/// for strongly squeezed states. Returns `None` when `Γ` is not positive
/// definite.
pub fn symplectic_eigenvalues(gamma: &Matrix4<f64>) -> Option<[f64; 2]> {
    let sym = (gamma + gamma.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    if eig.eigenvalues.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    let root = eig.eigenvectors
        * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
        * eig.eigenvectors.transpose();
    let a = root * omega() * root;
    let mut nu: Vec<f64> = a
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    nu.sort_by(f64::total_cmp);
    // singular values come in pairs; average each pair against rounding
    Some([(nu[0] + nu[1]) / 2.0, (nu[2] + nu[3]) / 2.0])
}

/// Smallest symplectic eigenvalue of the partially transposed state.
pub fn partial_transpose_min_eigenvalue(gamma: &Matrix4<f64>) -> Option<f64> {
    symplectic_eigenvalues(&partial_transpose(gamma)).map(|nu| nu[0])
}

/// Largest deviation of `S Ω Sᵀ` from `Ω`.
pub fn symplectic_defect(s: &Matrix4<f64>) -> f64 {
    let w = omega();
    (s * w * s.transpose() - w).abs().max()
}

/// Inverse of a symplectic matrix, `S⁻¹ = -Ω Sᵀ Ω`.
pub fn symplectic_inverse(s: &Matrix4<f64>) -> Matrix4<f64> {
    let w = omega();
    -(w * s.transpose() * w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_and_thermal_product() {
        let nu = symplectic_eigenvalues(&(Matrix4::identity() * 0.5)).unwrap();
        assert_relative_eq!(nu[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(nu[1], 0.5, epsilon = 1e-14);
        let g = Matrix4::from_diagonal(&Vector4::new(1.5, 1.5, 0.7, 0.7));
        let nu = symplectic_eigenvalues(&g).unwrap();
        assert_relative_eq!(nu[0], 0.7, epsilon = 1e-14);
        assert_relative_eq!(nu[1], 1.5, epsilon = 1e-14);
    }

    #[test]
    fn single_mode_squeezing_is_invariant() {
        let r: f64 = 0.8;
        let g = Matrix4::from_diagonal(&Vector4::new(
            0.5 * (2.0 * r).exp(),
            0.5 * (-2.0 * r).exp(),
            0.5,
            0.5,
        ));
        let nu = symplectic_eigenvalues(&g).unwrap();
        assert_relative_eq!(nu[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(nu[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn two_mode_squeezed_vacuum_under_partial_transpose() {
        let r: f64 = 0.4;
        let (c, s) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
        #[rustfmt::skip]
        let g = Matrix4::new(
            c, 0.0, s, 0.0,
            0.0, c, 0.0, -s,
            s, 0.0, c, 0.0,
            0.0, -s, 0.0, c,
        );
        let nu = partial_transpose_min_eigenvalue(&g).unwrap();
        assert_relative_eq!(nu, 0.5 * (-2.0 * r).exp(), epsilon = 1e-12);
    }

    #[test]
    fn inverse_of_symplectic_map() {
        let s = Matrix4::from_diagonal(&Vector4::new(2.0, 0.5, 0.25, 4.0));
        assert!(symplectic_defect(&s) < 1e-15);
        assert!(
            (symplectic_inverse(&s) * s - Matrix4::identity())
                .abs()
                .max()
                < 1e-15
        );
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let g = Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 1.0, 1.0));
        assert!(symplectic_eigenvalues(&g).is_none());
    }
}
