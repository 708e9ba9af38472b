//! Acceptance criteria, one pass/fail line each. Every criterion also has a
//! wall-clock budget.

use std::time::{Duration, Instant};

use hopfield_core::verify::{self, CheckResult};

struct Outcome {
    check: CheckResult,
    elapsed: Duration,
    budget: Duration,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.check.passed() && self.elapsed <= self.budget
    }

    fn line(&self) -> String {
        let metrics = self
            .check
            .metrics
            .iter()
            .map(|m| format!("{} = {:.3e} (tol {:.1e})", m.label, m.measured, m.tolerance))
            .collect::<Vec<_>>()
            .join("; ");
        format!(
            "criterion {:>2} {:<48} {}  [{:.2?} / {:?}]  {}",
            self.check.id,
            self.check.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.elapsed,
            self.budget,
            metrics
        )
    }
}

fn timed(budget_secs: u64, f: impl FnOnce() -> CheckResult) -> Outcome {
    let start = Instant::now();
    let check = f();
    Outcome {
        check,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget_secs),
    }
}

#[test]
fn acceptance_criteria() {
    let mut outcomes = vec![
        timed(1, verify::check_frequency_product),
        timed(5, verify::check_diagonalization_oracle),
        timed(1, verify::check_critical_coupling),
        timed(10, verify::check_two_route_covariance),
        timed(30, verify::check_dynamics_steady_state),
        timed(5, verify::check_closed_form_correlations),
        timed(1, verify::check_balance_frequency),
        timed(30, verify::check_qualitative),
        timed(5, verify::check_ppt_oracle),
    ];
    let first: Vec<CheckResult> = outcomes.iter().map(|o| o.check.clone()).collect();
    let render =
        |checks: &[CheckResult]| checks.iter().map(ToString::to_string).collect::<String>();
    let rendered = render(&first);
    outcomes.push(timed(10, || {
        verify::check_determinism(4, &rendered, || {
            render(&verify::numeric_checks(
                hopfield_core::correlations::partial_transpose_invariants,
            ))
        })
    }));

    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u8> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.check.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn injected_partial_transpose_error_is_reported() {
    fn wrong_sign(i_a: f64, i_b: f64, i_c: f64, i_ab: f64) -> (f64, f64) {
        hopfield_core::correlations::partial_transpose_invariants(i_a, i_b, -i_c, i_ab)
    }
    let check = verify::check_ppt_oracle_with(wrong_sign);
    assert!(!check.passed());
    let report = verify::verify_with(wrong_sign, 2);
    assert!(!report.all_passed());
    assert!(report
        .checks
        .iter()
        .filter(|c| !c.passed())
        .all(|c| c.id == 9 || c.id == 10));
}
