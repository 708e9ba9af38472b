//! Self-check suite: ten numerical acceptance checks with measured
//! deviations and tolerances. Output is a pure function of the code, so two
//! runs render identical reports.

use std::fmt;

use crate::basis::{
    bogoliubov_diagonalize_numeric, diagonalize, hopfield_coefficients, PolaritonBasis,
};
use crate::correlations::{
    gaussian_steering, ground_state_en_closed, ground_state_steering_closed, log_negativity,
    partial_transpose_invariants, purities, symplectic_invariants, SteeringClass,
    STEERING_THRESHOLD,
};
use crate::covariance::{
    build_transform_u, ground_state_covariance_generic, polariton_thermal_covariance,
    thermal_covariance_closed, to_bare_basis,
};
use crate::dynamics::{auto_step, collective_rates, evolve_second_moments, SecondMoments};
use crate::error::Result;
use crate::local_generator::resonant_balance_frequency;
use crate::model::{
    build_dynamical_matrix, critical_coupling, polariton_frequencies_analytic, ModelParams,
};
use crate::sampling::{
    hopfield_family_points, natural_hopfield_points, random_physical_covariance, rng,
};
use crate::sweep::{
    csv_string, evaluate_row, run_sweep, scenario, Axis, AxisName, PointSpec, StateKind, SweepSpec,
};
use crate::symplectic::partial_transpose_min_eigenvalue;
use crate::thermal::{thermal_occupation, Environment};

/// `(I_a, I_b, I_c, I_ab) ↦ (d̃₋, d̃₊)`; replaceable to exercise the PPT check.
pub type PartialTransposeFn = fn(f64, f64, f64, f64) -> (f64, f64);

/// One measured quantity; it passes when `measured ≤ tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub label: String,
    pub measured: f64,
    pub tolerance: f64,
}

impl Metric {
    fn new(label: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            tolerance,
        }
    }

    /// A count of violated conditions, which must be zero.
    fn count(label: impl Into<String>, violations: usize) -> Self {
        Self::new(label, violations as f64, 0.0)
    }

    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub metrics: Vec<Metric>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        !self.metrics.is_empty() && self.metrics.iter().all(Metric::passed)
    }

    fn from_outcome(id: u8, name: &'static str, outcome: Result<Vec<Metric>>) -> Self {
        let metrics = outcome
            .unwrap_or_else(|e| vec![Metric::new(format!("error: {e}"), f64::INFINITY, 0.0)]);
        Self { id, name, metrics }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "[{status}] {:>2} {}", self.id, self.name)?;
        for m in &self.metrics {
            let mark = if m.passed() { "ok" } else { "!!" };
            writeln!(
                f,
                "       {mark} {}: measured {:.3e}, tolerance {:.3e}",
                m.label, m.measured, m.tolerance
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{c}")?;
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        writeln!(f, "{passed}/{} checks passed", self.checks.len())
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(0.0, |acc, v| if v.is_nan() { f64::NAN } else { acc.max(v) })
}

const GRID_SEED: u64 = 1;

pub fn check_frequency_product() -> CheckResult {
    let outcome = natural_hopfield_points(GRID_SEED, 1000)
        .iter()
        .map(|p| {
            let (wu, wl) = polariton_frequencies_analytic(p)?;
            let target = p.omega_a() * p.omega_b();
            Ok((wu * wl - target).abs() / target)
        })
        .collect::<Result<Vec<f64>>>()
        .map(|dev| {
            vec![Metric::new(
                "max |w_U w_L - w_a w_b| / (w_a w_b), 1000 points",
                max_of(dev),
                1e-12,
            )]
        });
    CheckResult::from_outcome(1, "frequency product rule", outcome)
}

fn coefficient_deviation(a: &PolaritonBasis, b: &PolaritonBasis) -> f64 {
    let pairs = a
        .coeffs_upper()
        .into_iter()
        .zip(b.coeffs_upper())
        .chain(a.coeffs_lower().into_iter().zip(b.coeffs_lower()));
    max_of(pairs.map(|(x, y)| (x.abs() - y.abs()).abs()))
}

pub fn check_diagonalization_oracle() -> CheckResult {
    let outcome = (|| {
        let mut freq = Vec::new();
        let mut coeff = Vec::new();
        for p in natural_hopfield_points(GRID_SEED, 1000) {
            let analytic = hopfield_coefficients(&p)?;
            let numeric = bogoliubov_diagonalize_numeric(&build_dynamical_matrix(&p))?;
            freq.push(
                (analytic.omega_upper() - numeric.omega_upper()).abs() / analytic.omega_upper(),
            );
            freq.push(
                (analytic.omega_lower() - numeric.omega_lower()).abs() / analytic.omega_lower(),
            );
            coeff.push(coefficient_deviation(&analytic, &numeric));
        }
        Ok(vec![
            Metric::new("max relative frequency deviation", max_of(freq), 1e-10),
            Metric::new("max coefficient magnitude deviation", max_of(coeff), 1e-9),
        ])
    })();
    CheckResult::from_outcome(2, "analytic vs numeric diagonalization", outcome)
}

fn analytic_stable(p: &ModelParams) -> bool {
    polariton_frequencies_analytic(p).is_ok()
}

pub fn check_critical_coupling() -> CheckResult {
    let outcome = (|| {
        let mut analytic_wrong = 0;
        let mut numeric_wrong = 0;
        let mut flip = Vec::new();
        for wb in [0.5, 1.0, 2.0] {
            let lc = critical_coupling(wb, wb)?;
            let below = ModelParams::no_a2(wb, wb, lc - 1e-12 * wb)?;
            let above = ModelParams::no_a2(wb, wb, lc + 1e-12 * wb)?;
            analytic_wrong +=
                usize::from(!analytic_stable(&below)) + usize::from(analytic_stable(&above));
            numeric_wrong += usize::from(diagonalize(&below).is_err())
                + usize::from(diagonalize(&above).is_ok());
            // bisect the analytic stability boundary
            let (mut lo, mut hi) = (0.9 * lc, 1.1 * lc);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if analytic_stable(&ModelParams::no_a2(wb, wb, mid)?) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            flip.push((0.5 * (lo + hi) - lc).abs() / wb);
        }
        Ok(vec![
            Metric::count(
                "closed-form misclassifications at lambda_C -/+ 1e-12 w_b",
                analytic_wrong,
            ),
            Metric::count(
                "numeric misclassifications at lambda_C -/+ 1e-12 w_b",
                numeric_wrong,
            ),
            Metric::new("|bisected boundary - 0.5 w_b| / w_b", max_of(flip), 1e-12),
        ])
    })();
    CheckResult::from_outcome(3, "critical coupling without A^2 term", outcome)
}

fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    Axis::linspace(AxisName::Lambda, start, stop, count)
        .expect("valid range")
        .values
}

pub fn check_two_route_covariance() -> CheckResult {
    let outcome = (|| {
        let mut dev = Vec::new();
        for lambda in linspace(0.02, 1.2, 20) {
            for wa in linspace(0.1, 3.0, 20) {
                let p = ModelParams::hopfield(wa, 1.0, lambda)?;
                let basis = hopfield_coefficients(&p)?;
                let transform = build_transform_u(&p, &basis)?;
                for t in [0.0, 0.1, 0.25, 0.5, 1.0] {
                    let closed = thermal_covariance_closed(&p, t)?;
                    let routed =
                        to_bare_basis(&polariton_thermal_covariance(&basis, t), &transform)?;
                    dev.push(closed.max_abs_diff(&routed));
                }
            }
        }
        Ok(vec![Metric::new(
            "max element-wise deviation, 2000 points",
            max_of(dev),
            1e-9,
        )])
    })();
    CheckResult::from_outcome(4, "closed-form vs transformed thermal covariance", outcome)
}

/// Ten Hopfield points with `γ = 0.05` whose slowest branch still relaxes
/// within a bounded number of integration steps.
fn dynamics_points() -> Result<Vec<(PolaritonBasis, Environment)>> {
    let temps = [0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0];
    let mut out = Vec::new();
    for (i, p) in natural_hopfield_points(5, 200).iter().enumerate() {
        let basis = hopfield_coefficients(p)?;
        let env = Environment::new(temps[i % temps.len()], 0.05, 0.05)?;
        let rates = collective_rates(&basis, &env);
        let relax = rates.slowest_relaxation();
        if relax <= 0.0 {
            continue;
        }
        let steps = 50.0 / relax / auto_step(&rates, &basis);
        if steps < 2e5 {
            out.push((basis, env));
        }
        if out.len() == 10 {
            break;
        }
    }
    Ok(out)
}

pub fn check_dynamics_steady_state() -> CheckResult {
    let outcome = (|| {
        let points = dynamics_points()?;
        let mut dev = Vec::new();
        for (basis, env) in &points {
            let rates = collective_rates(basis, env);
            let t_final = 50.0 / rates.slowest_relaxation();
            let end = evolve_second_moments(
                &SecondMoments::vacuum(),
                &rates,
                basis,
                t_final,
                auto_step(&rates, basis),
            )?;
            let target = SecondMoments::diagonal(
                thermal_occupation(basis.omega_upper(), env.temperature()),
                thermal_occupation(basis.omega_lower(), env.temperature()),
            );
            dev.push(end.max_abs_diff(&target));
        }
        Ok(vec![
            Metric::count("missing parameter points (of 10)", 10 - points.len()),
            Metric::new(
                "max deviation from thermal polariton moments",
                max_of(dev),
                1e-8,
            ),
        ])
    })();
    CheckResult::from_outcome(5, "relaxation to the thermal steady state", outcome)
}

pub fn check_closed_form_correlations() -> CheckResult {
    let outcome = (|| {
        let mut en = Vec::new();
        let mut steer = Vec::new();
        for p in hopfield_family_points(6, 500) {
            let gamma = ground_state_covariance_generic(&diagonalize(&p)?);
            en.push((ground_state_en_closed(&p)? - log_negativity(&gamma)?).abs());
            let closed = ground_state_steering_closed(&p)?;
            let (g_ab, g_ba) = gaussian_steering(&gamma)?;
            steer.push((closed - g_ab).abs().max((closed - g_ba).abs()));
        }
        Ok(vec![
            Metric::new("max |E_N closed - pipeline|, 500 points", max_of(en), 1e-9),
            Metric::new(
                "max |G closed - pipeline|, both directions",
                max_of(steer),
                1e-9,
            ),
        ])
    })();
    CheckResult::from_outcome(6, "closed-form ground-state correlations", outcome)
}

pub fn check_balance_frequency() -> CheckResult {
    let outcome = (|| {
        let wa = resonant_balance_frequency(0.25, 1.0);
        let p = ModelParams::hopfield(wa, 1.0, 0.25)?;
        let mut dev = Vec::new();
        for t in [0.1, 0.2, 0.25, 0.5, 1.0] {
            let (mu_a, mu_b, _) = purities(&thermal_covariance_closed(&p, t)?)?;
            dev.push((mu_a - mu_b).abs());
        }
        Ok(vec![
            Metric::new(
                "|w_a* - 0.8828| at lambda = 0.25",
                (wa - 0.8828).abs(),
                5e-5,
            ),
            Metric::new(
                "max |mu_a - mu_b| at w_a*, T in {0.1..1}",
                max_of(dev),
                1e-9,
            ),
        ])
    })();
    CheckResult::from_outcome(7, "balance frequency", outcome)
}

fn sweep_reports(spec: &SweepSpec) -> Vec<Option<crate::correlations::CorrelationReport>> {
    spec.points()
        .iter()
        .map(|p| evaluate_row(p).report)
        .collect()
}

pub fn check_qualitative() -> CheckResult {
    let outcome = (|| {
        // (a) ground-state entanglement grows with the coupling
        let mut growth = 0;
        for wa in [0.5, 1.0, 2.0] {
            let mut spec = scenario("fig2a")?;
            spec.base.wa = wa;
            spec.axes.retain(|a| a.name == AxisName::Lambda);
            let en: Vec<f64> = sweep_reports(&spec)
                .iter()
                .map(|r| r.map_or(f64::NAN, |r| r.e_n))
                .collect();
            growth += en.windows(2).filter(|w| !(w[1] > w[0])).count();
        }

        // (b) thermal noise never helps
        let mut heating = 0;
        for lambda in linspace(0.01, 1.2, 40) {
            let p = ModelParams::hopfield(1.0, 1.0, lambda)?;
            let mut prev = f64::INFINITY;
            for t in linspace(0.01, 1.0, 40) {
                let en = log_negativity(&thermal_covariance_closed(&p, t)?)?;
                heating += usize::from(en > prev + 1e-12);
                prev = en;
            }
        }

        // (c) resonant point with natural A² term
        let point = PointSpec {
            lambda: 0.8,
            temperature: 0.25,
            ..PointSpec::default()
        };
        let r = evaluate_row(&point).report;
        let one_way = r.is_some_and(|r| {
            r.classification == SteeringClass::OneWayBtoA && r.mu_b < r.mu_ab && r.mu_ab < r.mu_a
        });

        // (d) resonant model without A² term
        let spec = scenario("fig5cd")?;
        let reports = sweep_reports(&spec);
        let not_noway = reports
            .iter()
            .flatten()
            .filter(|r| r.classification != SteeringClass::NoWay)
            .count();
        let unstable = reports.iter().filter(|r| r.is_none()).count();

        // (e) ground states steer symmetrically
        let mut asym = Vec::new();
        let mut not_two_way = 0;
        for p in hopfield_family_points(8, 500) {
            let gamma = ground_state_covariance_generic(&diagonalize(&p)?);
            let (g_ab, g_ba) = gaussian_steering(&gamma)?;
            asym.push((g_ab - g_ba).abs());
            if g_ab.max(g_ba) > STEERING_THRESHOLD {
                let class = crate::correlations::classify_steering(g_ab, g_ba);
                not_two_way += usize::from(class != SteeringClass::TwoWay);
            }
        }

        Ok(vec![
            Metric::count(
                "(a) non-increasing E_N steps along lambda, 3 traces",
                growth,
            ),
            Metric::count("(b) E_N increases with T at w_a = 1, 40x40 grid", heating),
            Metric::count(
                "(c) lambda = 0.8, T = 0.25 not one-way b->a with mu_b < mu_ab < mu_a",
                usize::from(!one_way),
            ),
            Metric::count("(d) stable D = 0 resonant points not NoWay", not_noway),
            Metric::count("(d) unstable points in the D = 0 resonant grid", unstable),
            Metric::count("(e) steerable ground states not TwoWay", not_two_way),
            Metric::new(
                "(e) max |g_ab - g_ba| in the ground state",
                max_of(asym),
                1e-10,
            ),
        ])
    })();
    CheckResult::from_outcome(8, "qualitative trends", outcome)
}

/// Compares `d̃₋` from `pt` against the direct symplectic spectrum of the
/// partially transposed matrix on 1000 random physical states.
pub fn check_ppt_oracle_with(pt: PartialTransposeFn) -> CheckResult {
    let outcome = (|| {
        let mut r = rng(9);
        let mut dev = Vec::new();
        for _ in 0..1000 {
            let gamma = random_physical_covariance(&mut r);
            let inv = symplectic_invariants(&gamma)?;
            let (d_minus, _) = pt(inv.i_a, inv.i_b, inv.i_c, inv.i_ab);
            let oracle = partial_transpose_min_eigenvalue(gamma.entries()).unwrap_or(f64::NAN);
            dev.push((d_minus - oracle).abs());
        }
        Ok(vec![Metric::new(
            "max |d_minus formula - oracle|, 1000 states",
            max_of(dev),
            1e-10,
        )])
    })();
    CheckResult::from_outcome(9, "partial-transpose eigenvalue vs oracle", outcome)
}

pub fn check_ppt_oracle() -> CheckResult {
    check_ppt_oracle_with(partial_transpose_invariants)
}

/// Fixed sweep used for the determinism check.
pub fn determinism_sweep() -> SweepSpec {
    let mut spec = scenario("fig4").expect("preset exists");
    spec.axes = vec![
        Axis::linspace(AxisName::Wa, 0.1, 2.0, 12).expect("valid axis"),
        Axis::linspace(AxisName::Lambda, 0.01, 1.2, 12).expect("valid axis"),
    ];
    spec.base.state = StateKind::Thermal;
    spec
}

/// Runs the fixed sweep serially and on `jobs` workers and re-renders
/// `rendered` from `rerun`.
pub fn check_determinism(
    jobs: usize,
    rendered: &str,
    rerun: impl FnOnce() -> String,
) -> CheckResult {
    let outcome = (|| {
        let spec = determinism_sweep();
        let serial = csv_string(&run_sweep(&spec, 1)?);
        let again = csv_string(&run_sweep(&spec, 1)?);
        let parallel = csv_string(&run_sweep(&spec, jobs.max(2))?);
        let report_again = rerun();
        Ok(vec![
            Metric::count(
                "sweep rows differing between two serial runs",
                differing_lines(&serial, &again),
            ),
            Metric::count(
                format!("sweep rows differing between 1 and {} workers", jobs.max(2)),
                differing_lines(&serial, &parallel),
            ),
            Metric::count(
                "report lines differing between two runs",
                differing_lines(rendered, &report_again),
            ),
        ])
    })();
    CheckResult::from_outcome(10, "determinism", outcome)
}

fn differing_lines(a: &str, b: &str) -> usize {
    let (la, lb): (Vec<&str>, Vec<&str>) = (a.lines().collect(), b.lines().collect());
    la.iter().zip(&lb).filter(|(x, y)| x != y).count() + la.len().abs_diff(lb.len())
}

pub fn numeric_checks(pt: PartialTransposeFn) -> Vec<CheckResult> {
    vec![
        check_frequency_product(),
        check_diagonalization_oracle(),
        check_critical_coupling(),
        check_two_route_covariance(),
        check_dynamics_steady_state(),
        check_closed_form_correlations(),
        check_balance_frequency(),
        check_qualitative(),
        check_ppt_oracle_with(pt),
    ]
}

fn render(checks: &[CheckResult]) -> String {
    checks.iter().map(ToString::to_string).collect()
}

/// Full suite with a replaceable `d̃₋` formula.
pub fn verify_with(pt: PartialTransposeFn, jobs: usize) -> VerifyReport {
    let mut checks = numeric_checks(pt);
    let rendered = render(&checks);
    checks.push(check_determinism(jobs, &rendered, || {
        render(&numeric_checks(pt))
    }));
    VerifyReport { checks }
}

pub fn verify(jobs: usize) -> VerifyReport {
    verify_with(partial_transpose_invariants, jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_semantics() {
        assert!(Metric::new("x", 1e-13, 1e-12).passed());
        assert!(!Metric::new("x", f64::NAN, 1e-12).passed());
        assert!(Metric::count("x", 0).passed());
        assert!(!Metric::count("x", 1).passed());
        let empty = CheckResult {
            id: 1,
            name: "empty",
            metrics: vec![],
        };
        assert!(!empty.passed());
    }

    #[test]
    fn sign_error_in_partial_transpose_is_caught() {
        fn flipped(i_a: f64, i_b: f64, i_c: f64, i_ab: f64) -> (f64, f64) {
            partial_transpose_invariants(i_a, i_b, -i_c, i_ab)
        }
        let check = check_ppt_oracle_with(flipped);
        assert!(!check.passed());
        assert!(check.to_string().starts_with("[FAIL]  9"));
    }

    #[test]
    fn clean_oracle_check_passes() {
        assert!(check_ppt_oracle().passed());
    }

    #[test]
    fn line_diff() {
        assert_eq!(differing_lines("a\nb", "a\nb"), 0);
        assert_eq!(differing_lines("a\nb", "a\nc\nd"), 2);
    }
}
