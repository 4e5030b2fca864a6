mod common;

use common::rel_err;
use influence::data::{self, BUILTIN_NAMES};
use influence::distribution::{
    column_space_check, ks_statistic, ks_test_chisq1, lemma1_condition,
    chisq_condition_at_leverage, simulate_and_test, simulate_quadratic_form,
    simulate_quadratic_form_full, synthetic_fit, Verdict,
};
use influence::Error;
use proptest::prelude::*;

#[test]
fn full_path_reproduces_reduced_samples() {
    for h in [0.2, 0.5, 0.8] {
        let fit = synthetic_fit(h).unwrap();
        let reduced = simulate_quadratic_form(h, 2000, 31).unwrap();
        let full = simulate_quadratic_form_full(&fit, 1, 2000, 31).unwrap();
        for (a, b) in reduced.iter().zip(&full) {
            assert!((a - b).abs() <= 1e-10 * a.max(1.0));
        }
    }
    // A real design: the reduced path at that observation's leverage.
    let fit = data::builtin("hald").unwrap().fit().unwrap();
    let h = fit.leverage()[2];
    let reduced = simulate_quadratic_form(h, 2000, 5).unwrap();
    let full = simulate_quadratic_form_full(&fit, 3, 2000, 5).unwrap();
    for (a, b) in reduced.iter().zip(&full) {
        assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }
}

#[test]
fn ks_verdicts_at_pinned_seed() {
    let (mean, r) = simulate_and_test(0.5, 100_000, 7).unwrap();
    assert_eq!(r.verdict(), Verdict::Pass, "p = {}", r.p_value);
    assert!((mean - 1.0).abs() < 0.02);
    for h in [0.3, 0.7] {
        let (_, r) = simulate_and_test(h, 100_000, 7).unwrap();
        assert_eq!(r.verdict(), Verdict::Reject);
        assert!(r.p_value < 1e-6);
    }
}

#[test]
fn ks_statistic_of_uniform_grid() {
    // Midpoints of n equal cells against the uniform CDF: D = 1/(2n).
    let n = 200;
    let s: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();
    let d = ks_statistic(&s, |x| x.clamp(0.0, 1.0));
    assert!((d - 0.5 / n as f64).abs() < 1e-15);
}

#[test]
fn ks_rejects_wrong_scale() {
    let q: Vec<f64> = simulate_quadratic_form(0.5, 5000, 3).unwrap();
    let doubled: Vec<f64> = q.iter().map(|v| 2.0 * v).collect();
    assert!(ks_test_chisq1(&doubled).unwrap().p_value < 1e-6);
    assert!(matches!(
        ks_test_chisq1(&q[..10]),
        Err(Error::TooFewSamples { got: 10, .. })
    ));
}

#[test]
fn explicit_products_match_closed_forms_on_every_row() {
    for name in BUILTIN_NAMES {
        let fit = data::builtin(name).unwrap().fit().unwrap();
        for i in 1..=fit.n() {
            let c = lemma1_condition(&fit, i).unwrap();
            let h = c.h;
            assert!(rel_err(c.trace_value, h / (1.0 - h)) < 1e-9, "{name} i={i}");
            assert!(c.closed_form_error < 1e-9);
            // No bundled leverage equals 1/2, so no row qualifies.
            assert!(!c.satisfied, "{name} i={i}");
        }
    }
}

#[test]
fn trace_is_integer_at_two_thirds_but_condition_fails() {
    let c = chisq_condition_at_leverage(2.0 / 3.0).unwrap();
    assert!((c.trace_value - 2.0).abs() < 1e-12);
    assert!(c.condition1_residual > 0.5);
    assert!(!c.satisfied);
    assert_eq!(c.degrees_of_freedom(), Some(2));
    let half = chisq_condition_at_leverage(0.5).unwrap();
    assert!(half.satisfied);
    assert_eq!(half.degrees_of_freedom(), Some(1));
}

#[test]
fn samples_stay_in_column_space_on_hald() {
    let fit = data::builtin("hald").unwrap().fit().unwrap();
    let r = column_space_check(&fit, 3, 10_000, 99).unwrap();
    assert!(r <= 1e-12, "{r}");
}

#[test]
fn invalid_leverage_is_rejected() {
    for h in [0.0, 1.0, 1.2, -0.1, f64::NAN] {
        assert!(matches!(
            simulate_quadratic_form(h, 10, 1),
            Err(Error::InvalidLeverage(_))
        ));
    }
    let msg = simulate_quadratic_form(1.2, 10, 1).unwrap_err().to_string();
    assert!(msg.contains("leverage must lie in (0,1)"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trace_follows_leverage(h in 0.01f64..0.99) {
        let c = chisq_condition_at_leverage(h).unwrap();
        prop_assert!((c.trace_value - h / (1.0 - h)).abs() <= 1e-9 * (h / (1.0 - h)).max(1.0));
        prop_assert_eq!(c.satisfied, (h - 0.5).abs() < 1e-9);
    }

    #[test]
    fn simulation_is_reproducible(h in 0.05f64..0.95, seed in any::<u64>()) {
        let a = simulate_quadratic_form(h, 200, seed).unwrap();
        let b = simulate_quadratic_form(h, 200, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
