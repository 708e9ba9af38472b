use hopfield_core::correlations::SteeringClass;
use hopfield_core::local_generator::resonant_balance_frequency;
use hopfield_core::sweep::{csv_string, run_sweep, scenario, ResultRow, CSV_HEADER};

fn rows(name: &str) -> Vec<ResultRow> {
    run_sweep(&scenario(name).unwrap(), 2).unwrap()
}

fn class(row: &ResultRow) -> Option<SteeringClass> {
    row.report.map(|r| r.classification)
}

#[test]
fn direction_flips_across_balance_frequency() {
    let balance = resonant_balance_frequency(0.25, 1.0);
    let rows = rows("fig6a");
    assert!(rows.iter().all(ResultRow::stable));
    let a_to_b: Vec<f64> = rows
        .iter()
        .filter(|r| class(r) == Some(SteeringClass::OneWayAtoB))
        .map(|r| r.wa)
        .collect();
    let b_to_a: Vec<f64> = rows
        .iter()
        .filter(|r| class(r) == Some(SteeringClass::OneWayBtoA))
        .map(|r| r.wa)
        .collect();
    assert!(!a_to_b.is_empty() && !b_to_a.is_empty());
    assert!(a_to_b.iter().all(|&w| w < balance));
    assert!(b_to_a.iter().all(|&w| w > balance));
}

#[test]
fn purities_order_matches_direction() {
    for row in rows("fig6").iter().chain(&rows("fig5")) {
        let r = row.report.unwrap();
        match r.classification {
            SteeringClass::OneWayBtoA => assert!(r.mu_a > r.mu_b),
            SteeringClass::OneWayAtoB => assert!(r.mu_b > r.mu_a),
            _ => {}
        }
    }
}

#[test]
fn off_resonant_no_a2_steers_one_way() {
    let rows = rows("fig8");
    let stable: Vec<_> = rows.iter().filter(|r| r.stable()).collect();
    assert_eq!(stable.len(), rows.len());
    let one_way = stable
        .iter()
        .filter(|r| class(r) == Some(SteeringClass::OneWayBtoA))
        .count();
    assert!(one_way > 0);
    assert!(stable
        .iter()
        .all(|r| class(r) != Some(SteeringClass::OneWayAtoB)));
}

#[test]
fn squeezing_only_ground_state() {
    for row in rows("fig2c") {
        match row.report {
            Some(r) => {
                let (wu, wl) = row.frequencies.unwrap();
                assert!((wu - wl).abs() < 1e-12);
                assert!((wu - (1.0 - row.lambda * row.lambda).sqrt()).abs() < 1e-10);
                assert!(r.e_n > 0.0);
                assert_eq!(r.classification, SteeringClass::TwoWay);
            }
            None => assert!(row.lambda >= 1.0),
        }
    }
}

#[test]
fn mixing_only_ground_state_is_vacuum() {
    for row in rows("fig2d") {
        match row.report {
            Some(r) => {
                assert!(r.e_n.abs() < 1e-12);
                assert!(r.n_a.abs() < 1e-12 && r.n_b.abs() < 1e-12);
                assert_eq!(r.classification, SteeringClass::NoWay);
            }
            None => assert!(row.lambda >= 1.0),
        }
    }
}

#[test]
fn natural_diamagnetic_term_is_always_stable() {
    assert!(rows("fig2a").iter().all(ResultRow::stable));
    assert!(rows("fig3b").iter().all(ResultRow::stable));
}

#[test]
fn csv_layout() {
    let text = csv_string(&rows("fig5cd"));
    assert!(text.ends_with('\n'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    for line in lines {
        assert_eq!(line.split(',').count(), 16);
        assert!(line.ends_with(",true"));
    }
}
