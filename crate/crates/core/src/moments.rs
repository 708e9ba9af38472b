//! Second-order moments of the bare modes for diagonal polariton states.
//!
//! With `a = Σ_j (w_j p_j - y_j p_j†)`, `b = Σ_j (x_j p_j - z_j p_j†)` and
//! `⟨p_j†p_k⟩ = n_j δ_jk`, every quadratic moment is a sum over branches of
//! a term linear in `n_j` plus a vacuum contribution.

use nalgebra::Matrix4;

use crate::basis::PolaritonBasis;
use crate::covariance::{CovarianceMatrix, QuadratureBasis};
use crate::error::{Error, Result};

/// The twelve quadratic moments. Coefficients are real, so
/// `⟨a†²⟩ = ⟨a²⟩`, `⟨b†²⟩ = ⟨b²⟩` and `⟨b†a†⟩ = ⟨ab⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorTable {
    pub a_dag_a: f64,
    pub a_a_dag: f64,
    pub a_dag_sq: f64,
    pub a_sq: f64,
    pub b_dag_b: f64,
    pub b_b_dag: f64,
    pub b_dag_sq: f64,
    pub b_sq: f64,
    pub b_dag_a_dag: f64,
    pub a_dag_b: f64,
    pub a_b_dag: f64,
    pub a_b: f64,
}

pub fn second_order_correlators(
    basis: &PolaritonBasis,
    occupations: (f64, f64),
) -> Result<CorrelatorTable> {
    let (n_u, n_l) = occupations;
    if !(n_u >= 0.0 && n_l >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "occupations must be non-negative (got {n_u}, {n_l})"
        )));
    }
    let mut t = CorrelatorTable {
        a_dag_a: 0.0,
        a_a_dag: 0.0,
        a_dag_sq: 0.0,
        a_sq: 0.0,
        b_dag_b: 0.0,
        b_b_dag: 0.0,
        b_dag_sq: 0.0,
        b_sq: 0.0,
        b_dag_a_dag: 0.0,
        a_dag_b: 0.0,
        a_b_dag: 0.0,
        a_b: 0.0,
    };
    for ([w, x, y, z], n) in [(basis.coeffs_upper(), n_u), (basis.coeffs_lower(), n_l)] {
        t.a_dag_a += (w * w + y * y) * n + y * y;
        t.a_a_dag += (w * w + y * y) * n + w * w;
        t.a_sq -= w * y * (2.0 * n + 1.0);
        t.b_dag_b += (x * x + z * z) * n + z * z;
        t.b_b_dag += (x * x + z * z) * n + x * x;
        t.b_sq -= x * z * (2.0 * n + 1.0);
        t.a_dag_b += (w * x + y * z) * n + y * z;
        t.a_b_dag += (w * x + y * z) * n + w * x;
        t.a_b -= (w * z + x * y) * n + w * z;
    }
    t.a_dag_sq = t.a_sq;
    t.b_dag_sq = t.b_sq;
    t.b_dag_a_dag = t.a_b;
    Ok(t)
}

impl CorrelatorTable {
    /// Bare-basis covariance assembled from the moments.
    pub fn covariance(&self) -> CovarianceMatrix {
        let xa = (self.a_sq + self.a_dag_sq + self.a_a_dag + self.a_dag_a) / 2.0;
        let pa = (self.a_a_dag + self.a_dag_a - self.a_sq - self.a_dag_sq) / 2.0;
        let xb = (self.b_sq + self.b_dag_sq + self.b_b_dag + self.b_dag_b) / 2.0;
        let pb = (self.b_b_dag + self.b_dag_b - self.b_sq - self.b_dag_sq) / 2.0;
        let xx = (self.a_b + self.a_b_dag + self.a_dag_b + self.b_dag_a_dag) / 2.0;
        let pp = (self.a_b_dag + self.a_dag_b - self.a_b - self.b_dag_a_dag) / 2.0;
        #[rustfmt::skip]
        let g = Matrix4::new(
            xa,  0.0, xx,  0.0,
            0.0, pa,  0.0, pp,
            xx,  0.0, xb,  0.0,
            0.0, pp,  0.0, pb,
        );
        CovarianceMatrix::new(g, QuadratureBasis::Bare)
    }
}
