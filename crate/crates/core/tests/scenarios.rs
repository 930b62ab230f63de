use galwalk::expcli::run::{run_convergence, run_finite_field, ConvergenceOutput, ConvergenceRow};
use galwalk::expcli::{scenario, ExperimentConfig};
use galwalk::finfield::enumerate_mod_p;
use galwalk::permkit::DEFAULT_BOUND;

const MONOTONE_SLACK: f64 = 0.05;
const SL2_K30_MISMATCH_MAX: f64 = 0.1;

fn convergence(name: &str, ks: Vec<usize>) -> Vec<ConvergenceRow> {
    let cfg = ExperimentConfig {
        scenario: name.into(),
        ks,
        ..Default::default()
    };
    match run_convergence(&scenario(name).unwrap(), &cfg).unwrap() {
        ConvergenceOutput::Predicted(rows) => rows,
        ConvergenceOutput::Quadratic(_) => panic!("{name} has predictions"),
    }
}

#[test]
fn mismatch_is_non_increasing_from_k10() {
    for name in ["sl(2)", "sl(3)"] {
        let rows = convergence(name, vec![10, 15, 20, 25, 30]);
        let m: Vec<f64> = rows.iter().map(|r| r.mismatch_fraction.unwrap()).collect();
        for w in m.windows(2) {
            assert!(w[1] <= w[0] + MONOTONE_SLACK, "{name}: {m:?}");
        }
    }
}

#[test]
fn sl2_mismatch_at_k30() {
    let rows = convergence("sl(2)", vec![30]);
    let m = rows[0].mismatch_fraction.unwrap();
    assert!(m <= SL2_K30_MISMATCH_MAX, "sl(2) k=30 mismatch {m}");
}

#[test]
fn cosets_have_equal_size_mod_p() {
    for (name, primes) in [
        ("sl_tau(2)", &[3u64, 5, 7][..]),
        ("sl_power_cyclic(2,2)", &[3, 5]),
        ("sl_power_cyclic(2,3)", &[3]),
    ] {
        let s = scenario(name).unwrap();
        for &p in primes {
            let cosets = enumerate_mod_p(&s.gens, p, DEFAULT_BOUND).unwrap();
            assert_eq!(cosets.len(), s.cosets.len());
            assert!(
                cosets.iter().all(|c| c.len() == cosets[0].len()),
                "{name} p={p}"
            );
        }
    }
}

#[test]
fn no_target_type_has_zero_density() {
    for (name, primes) in [
        ("sl(2)", vec![5u64, 7, 11, 13, 17]),
        ("sl_tau(2)", vec![5, 7, 11, 13, 17]),
        ("sl_power_cyclic(2,2)", vec![5, 7]),
        ("res_scalars_sqrt2", vec![5, 7]),
    ] {
        let cfg = ExperimentConfig {
            field_primes: primes,
            ..Default::default()
        };
        let out = run_finite_field(&scenario(name).unwrap(), &cfg).unwrap();
        let flagged: Vec<String> = out
            .rows
            .iter()
            .filter(|r| r.flagged)
            .map(|r| format!("{}@{} {:?}", r.coset, r.p, r.cycle_type))
            .collect();
        assert!(flagged.is_empty(), "{name}: {flagged:?}");
    }
}

#[test]
fn bad_prime_gives_a_marker_row() {
    let cfg = ExperimentConfig {
        field_primes: vec![2, 5],
        ..Default::default()
    };
    let out = run_finite_field(&scenario("sl(2)").unwrap(), &cfg).unwrap();
    assert!(out
        .rows
        .iter()
        .any(|r| r.p == 2 && r.status == "bad_prime" && r.cycle_type.is_none()));
    assert_eq!(out.rows.iter().filter(|r| r.p == 5).count(), 2);
    assert_eq!(out.skipped.len(), 1);
}
