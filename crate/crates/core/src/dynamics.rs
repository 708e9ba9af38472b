//! Polariton second moments in a common Ohmic reservoir.
//!
//! Each branch `j` is damped by `Γ^C(-ω_j) 𝒟[p_j] + Γ^C(ω_j) 𝒟[p_j†]` with
//! collective rates
//! `Γ^C(±ω_j) = (√Γ_A(±ω_j) W_j + √Γ_B(±ω_j) X_j)²`, `W_j = w_j - y_j`,
//! `X_j = x_j - z_j`, absorption `Γ_ν(ω) = γ^ν ω N(ω)` and emission
//! `Γ_ν(-ω) = γ^ν ω (N(ω) + 1)`. The two coupling paths interfere, so a rate
//! may vanish (a dark polariton).

use num_complex::Complex64;

use crate::basis::PolaritonBasis;
use crate::error::{Error, Result};
use crate::thermal::{thermal_occupation, Environment};

/// Largest allowed `dt · max(rate, frequency)`.
pub const MAX_STEP_PRODUCT: f64 = 0.1;

/// Collective absorption (`up`) and emission (`down`) rates of both branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    pub up_u: f64,
    pub down_u: f64,
    pub up_l: f64,
    pub down_l: f64,
}

impl RateSet {
    /// `Υ_j = Γ^C(ω_j) - Γ^C(-ω_j)` for the upper and lower branch.
    pub fn upsilon(&self) -> (f64, f64) {
        (self.up_u - self.down_u, self.up_l - self.down_l)
    }

    pub fn max_rate(&self) -> f64 {
        [self.up_u, self.down_u, self.up_l, self.down_l]
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Slowest relaxation rate `min_j (down_j - up_j)`.
    pub fn slowest_relaxation(&self) -> f64 {
        (self.down_u - self.up_u).min(self.down_l - self.up_l)
    }
}

pub fn collective_rates(basis: &PolaritonBasis, env: &Environment) -> RateSet {
    let rates = |c: [f64; 4], omega: f64| {
        let w = c[0] - c[2];
        let x = c[1] - c[3];
        let n = thermal_occupation(omega, env.temperature());
        let path = |occ: f64| {
            let amp =
                (env.gamma_a() * omega * occ).sqrt() * w + (env.gamma_b() * omega * occ).sqrt() * x;
            amp * amp
        };
        (path(n), path(n + 1.0))
    };
    let (up_u, down_u) = rates(basis.coeffs_upper(), basis.omega_upper());
    let (up_l, down_l) = rates(basis.coeffs_lower(), basis.omega_lower());
    RateSet {
        up_u,
        down_u,
        up_l,
        down_l,
    }
}

/// `⟨p_j†p_j⟩`, `⟨p_j²⟩` and `⟨p_U†p_L⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondMoments {
    pub occ_u: f64,
    pub occ_l: f64,
    pub sq_u: Complex64,
    pub sq_l: Complex64,
    pub cross: Complex64,
}

impl SecondMoments {
    pub fn vacuum() -> Self {
        Self::diagonal(0.0, 0.0)
    }

    pub fn diagonal(occ_u: f64, occ_l: f64) -> Self {
        Self {
            occ_u,
            occ_l,
            sq_u: Complex64::new(0.0, 0.0),
            sq_l: Complex64::new(0.0, 0.0),
            cross: Complex64::new(0.0, 0.0),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            (self.occ_u - other.occ_u).abs(),
            (self.occ_l - other.occ_l).abs(),
            (self.sq_u - other.sq_u).norm(),
            (self.sq_l - other.sq_l).norm(),
            (self.cross - other.cross).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn to_array(self) -> [Complex64; 5] {
        [
            Complex64::new(self.occ_u, 0.0),
            Complex64::new(self.occ_l, 0.0),
            self.sq_u,
            self.sq_l,
            self.cross,
        ]
    }

    fn from_array(v: [Complex64; 5]) -> Self {
        Self {
            occ_u: v[0].re,
            occ_l: v[1].re,
            sq_u: v[2],
            sq_l: v[3],
            cross: v[4],
        }
    }
}

/// The equations of motion are decoupled and linear, `ẏ_k = κ_k y_k + s_k`:
///
/// - `d⟨p_j†p_j⟩/dt = -Γ^C(-ω_j)⟨p_j†p_j⟩ + Γ^C(ω_j)⟨p_jp_j†⟩ = Υ_j⟨p_j†p_j⟩ + Γ^C(ω_j)`
/// - `d⟨p_j²⟩/dt = (Υ_j - 2iω_j)⟨p_j²⟩`
/// - `d⟨p_U†p_L⟩/dt = (i(ω_U - ω_L) + (Υ_U + Υ_L)/2)⟨p_U†p_L⟩`
fn linear_system(rates: &RateSet, basis: &PolaritonBasis) -> ([Complex64; 5], [Complex64; 5]) {
    let (ups_u, ups_l) = rates.upsilon();
    let (wu, wl) = (basis.omega_upper(), basis.omega_lower());
    let kappa = [
        Complex64::new(ups_u, 0.0),
        Complex64::new(ups_l, 0.0),
        Complex64::new(ups_u, -2.0 * wu),
        Complex64::new(ups_l, -2.0 * wl),
        Complex64::new((ups_u + ups_l) / 2.0, wu - wl),
    ];
    let zero = Complex64::new(0.0, 0.0);
    let source = [
        Complex64::new(rates.up_u, 0.0),
        Complex64::new(rates.up_l, 0.0),
        zero,
        zero,
        zero,
    ];
    (kappa, source)
}

/// Time derivative of the moments.
pub fn moment_derivative(
    state: &SecondMoments,
    rates: &RateSet,
    basis: &PolaritonBasis,
) -> SecondMoments {
    let (kappa, source) = linear_system(rates, basis);
    let y = state.to_array();
    SecondMoments::from_array(std::array::from_fn(|k| kappa[k] * y[k] + source[k]))
}

/// Step size `0.05 / max(ω_U, rates)`.
pub fn auto_step(rates: &RateSet, basis: &PolaritonBasis) -> f64 {
    0.05 / basis.omega_upper().max(rates.max_rate())
}

fn check_step(dt: f64, rates: &RateSet, basis: &PolaritonBasis) -> Result<()> {
    let product = dt * basis.omega_upper().max(rates.max_rate());
    if !(dt > 0.0) || product > MAX_STEP_PRODUCT {
        return Err(Error::StepSize(product));
    }
    Ok(())
}

/// Fixed-step RK4 integration returning the state every `every` steps
/// (and at `t_final`). The step is shrunk so that it divides `t_final`.
pub fn trajectory(
    initial: &SecondMoments,
    rates: &RateSet,
    basis: &PolaritonBasis,
    t_final: f64,
    dt: f64,
    every: usize,
) -> Result<Vec<(f64, SecondMoments)>> {
    check_step(dt, rates, basis)?;
    if !(t_final >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "t_final must be >= 0 (got {t_final})"
        )));
    }
    let every = every.max(1);
    let steps = (t_final / dt).ceil() as usize;
    let h = if steps == 0 {
        0.0
    } else {
        t_final / steps as f64
    };
    let (kappa, source) = linear_system(rates, basis);
    let f = |y: &[Complex64; 5]| -> [Complex64; 5] {
        std::array::from_fn(|k| kappa[k] * y[k] + source[k])
    };
    let mut y = initial.to_array();
    let mut out = vec![(0.0, *initial)];
    for step in 1..=steps {
        let k1 = f(&y);
        let y2: [Complex64; 5] = std::array::from_fn(|k| y[k] + k1[k] * (h / 2.0));
        let k2 = f(&y2);
        let y3: [Complex64; 5] = std::array::from_fn(|k| y[k] + k2[k] * (h / 2.0));
        let k3 = f(&y3);
        let y4: [Complex64; 5] = std::array::from_fn(|k| y[k] + k3[k] * h);
        let k4 = f(&y4);
        y = std::array::from_fn(|k| y[k] + (k1[k] + k2[k] * 2.0 + k3[k] * 2.0 + k4[k]) * (h / 6.0));
        if step % every == 0 || step == steps {
            out.push((step as f64 * h, SecondMoments::from_array(y)));
        }
    }
    Ok(out)
}

pub fn evolve_second_moments(
    initial: &SecondMoments,
    rates: &RateSet,
    basis: &PolaritonBasis,
    t_final: f64,
    dt: f64,
) -> Result<SecondMoments> {
    let traj = trajectory(initial, rates, basis, t_final, dt, usize::MAX)?;
    Ok(traj.last().map(|(_, s)| *s).unwrap_or(*initial))
}

/// Fixed point `⟨p_j†p_j⟩ = Γ^C(ω_j)/(Γ^C(-ω_j) - Γ^C(ω_j))` with vanishing
/// anomalous and cross moments. A branch whose net relaxation
/// `down - up` is below `1e-12` of the largest rate counts as undamped.
pub fn steady_state_second_moments(rates: &RateSet) -> Result<SecondMoments> {
    let floor = 1e-12 * rates.max_rate();
    for (branch, down, up) in [
        ("upper", rates.down_u, rates.up_u),
        ("lower", rates.down_l, rates.up_l),
    ] {
        if !(down - up > floor) {
            return Err(Error::NoSteadyState { branch, down, up });
        }
    }
    Ok(SecondMoments::diagonal(
        rates.up_u / (rates.down_u - rates.up_u),
        rates.up_l / (rates.down_l - rates.up_l),
    ))
}

/// CSV header for trajectory dumps.
pub const TRAJECTORY_HEADER: &str =
    "t,occ_U,occ_L,re_sq_U,im_sq_U,re_sq_L,im_sq_L,re_cross,im_cross";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{diagonalize, hopfield_coefficients};
    use crate::model::ModelParams;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn golden() -> PolaritonBasis {
        hopfield_coefficients(&ModelParams::hopfield(1.0, 1.0, 0.5).unwrap()).unwrap()
    }

    #[test]
    fn zero_temperature_rates() {
        let b = golden();
        let env = Environment::new(0.0, 0.02, 0.03).unwrap();
        let r = collective_rates(&b, &env);
        assert_eq!(r.up_u, 0.0);
        assert_eq!(r.up_l, 0.0);
        let [w, x, y, z] = b.coeffs_upper();
        let wu = b.omega_upper();
        let expected = ((0.02 * wu).sqrt() * (w - y) + (0.03 * wu).sqrt() * (x - z)).powi(2);
        assert_relative_eq!(r.down_u, expected, max_relative = 1e-14);
        let s = steady_state_second_moments(&r).unwrap();
        assert_eq!(s, SecondMoments::vacuum());
    }

    #[test]
    fn equal_slopes_factorize() {
        let b = golden();
        let env = Environment::new(0.3, 0.05, 0.05).unwrap();
        let r = collective_rates(&b, &env);
        let [w, x, y, z] = b.coeffs_lower();
        let wl = b.omega_lower();
        let n = thermal_occupation(wl, 0.3);
        assert_relative_eq!(
            r.up_l,
            0.05 * wl * n * (w - y + x - z).powi(2),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            r.down_l,
            0.05 * wl * (n + 1.0) * (w - y + x - z).powi(2),
            max_relative = 1e-12
        );
    }

    #[test]
    fn steady_state_is_thermal() {
        let b = golden();
        let env = Environment::at_temperature(0.15).unwrap();
        let s = steady_state_second_moments(&collective_rates(&b, &env)).unwrap();
        assert_relative_eq!(
            s.occ_u,
            thermal_occupation(1.618_033_988_749_895, 0.15),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            s.occ_l,
            thermal_occupation(0.618_033_988_749_895, 0.15),
            max_relative = 1e-12
        );
    }

    #[test]
    fn dark_lower_polariton_has_no_steady_state() {
        // resonance without A² term and equal slopes: W_L + X_L = 0
        let b = hopfield_coefficients(&ModelParams::no_a2(1.0, 1.0, 0.3).unwrap()).unwrap();
        let r = collective_rates(&b, &Environment::at_temperature(0.2).unwrap());
        assert!(r.down_l < 1e-15);
        assert!(matches!(
            steady_state_second_moments(&r),
            Err(Error::NoSteadyState {
                branch: "lower",
                ..
            })
        ));
    }

    #[test]
    fn fixed_point_is_preserved() {
        let b = golden();
        let r = collective_rates(&b, &Environment::at_temperature(0.25).unwrap());
        let s = steady_state_second_moments(&r).unwrap();
        let out = evolve_second_moments(&s, &r, &b, 100.0, auto_step(&r, &b)).unwrap();
        assert!(out.max_abs_diff(&s) < 1e-10);
    }

    #[test]
    fn relaxes_from_vacuum() {
        let b = golden();
        let r = collective_rates(&b, &Environment::new(0.25, 0.05, 0.05).unwrap());
        let t = 50.0 / r.slowest_relaxation();
        let out =
            evolve_second_moments(&SecondMoments::vacuum(), &r, &b, t, auto_step(&r, &b)).unwrap();
        assert!((out.occ_u - thermal_occupation(b.omega_upper(), 0.25)).abs() < 1e-8);
        assert!((out.occ_l - thermal_occupation(b.omega_lower(), 0.25)).abs() < 1e-8);
    }

    #[test]
    fn anomalous_moment_envelope() {
        let b = golden();
        let r = collective_rates(&b, &Environment::new(0.25, 0.05, 0.05).unwrap());
        let mut init = SecondMoments::vacuum();
        init.sq_u = Complex64::new(1.0, 0.0);
        let traj = trajectory(&init, &r, &b, 40.0, auto_step(&r, &b) / 10.0, 1000).unwrap();
        let (ups, _) = r.upsilon();
        for (t, s) in traj {
            let expected = (ups * t).exp();
            assert!((s.sq_u.norm() - expected).abs() < 1e-6 * expected);
            let phase = Complex64::new(0.0, -2.0 * b.omega_upper() * t).exp() * expected;
            assert!((s.sq_u - phase).norm() < 1e-6);
        }
    }

    #[test]
    fn step_size_is_checked() {
        let b = golden();
        let r = collective_rates(&b, &Environment::at_temperature(0.25).unwrap());
        assert!(matches!(
            evolve_second_moments(&SecondMoments::vacuum(), &r, &b, 1.0, 0.1),
            Err(Error::StepSize(_))
        ));
        assert!(evolve_second_moments(&SecondMoments::vacuum(), &r, &b, 1.0, 0.0).is_err());
    }

    #[test]
    fn trajectory_sampling() {
        let b = golden();
        let r = collective_rates(&b, &Environment::at_temperature(0.25).unwrap());
        let traj = trajectory(&SecondMoments::vacuum(), &r, &b, 1.0, 0.01, 10).unwrap();
        assert_eq!(traj.len(), 11);
        assert_relative_eq!(traj.last().unwrap().0, 1.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn detailed_balance(
            wa in 0.1f64..3.0, lambda in 0.05f64..1.0, t in 0.01f64..1.0,
            ga in 1e-4f64..1e-1, gb in 1e-4f64..1e-1,
        ) {
            let p = ModelParams::hopfield(wa, 1.0, lambda).unwrap();
            let Ok(b) = diagonalize(&p) else { return Ok(()); };
            let r = collective_rates(&b, &Environment::new(t, ga, gb).unwrap());
            let Ok(s) = steady_state_second_moments(&r) else { return Ok(()); };
            let nu = thermal_occupation(b.omega_upper(), t);
            let nl = thermal_occupation(b.omega_lower(), t);
            prop_assert!((s.occ_u - nu).abs() <= 1e-12 * nu.max(1.0));
            prop_assert!((s.occ_l - nl).abs() <= 1e-12 * nl.max(1.0));
        }
    }
}
