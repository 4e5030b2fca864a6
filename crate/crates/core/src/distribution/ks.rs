//! One-sample Kolmogorov-Smirnov test against the chi-squared(1) law.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_KS_SAMPLES: usize = 100;

/// Terms kept in the Kolmogorov tail series.
pub const KOLMOGOROV_TERMS: usize = 100;

/// Label of the reference distribution.
pub const CHISQ1_LABEL: &str = "chi-squared, 1 degree of freedom";

/// Verdict thresholds on the p-value.
pub const PASS_P: f64 = 0.01;
pub const REJECT_P: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    /// `p > 0.01`: consistent with chi-squared(1).
    Pass,
    /// `p < 1e-6`: chi-squared(1) rejected.
    Reject,
    /// In between; neither claim is made.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Reject => "REJECT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloResult {
    pub sample_count: usize,
    pub ks_statistic: f64,
    pub p_value: f64,
    pub reference: &'static str,
    /// Seed of the generating stream, when the samples were simulated here.
    pub seed: Option<u64>,
}

impl MonteCarloResult {
    pub fn verdict(&self) -> Verdict {
        if self.p_value > PASS_P {
            Verdict::Pass
        } else if self.p_value < REJECT_P {
            Verdict::Reject
        } else {
            Verdict::Inconclusive
        }
    }
}

/// `F(q) = erf(√(q/2))` for `q ≥ 0`.
pub fn chisq1_cdf(q: f64) -> f64 {
    if q <= 0.0 {
        0.0
    } else {
        libm::erf((0.5 * q).sqrt())
    }
}

/// Asymptotic Kolmogorov tail `Q(λ) = 2 Σ_{k≥1} (-1)^{k-1} exp(-2k²λ²)`.
///
/// The alternating series is useless near zero, where `Q` is 1 to within
/// 1e-12 for every `λ < 0.2`.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=KOLMOGOROV_TERMS {
        let kf = k as f64;
        sum += sign * (-2.0 * kf * kf * lambda * lambda).exp();
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Kolmogorov-Smirnov statistic `sup |F_n - F|` against a continuous CDF.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        let above = (i as f64 + 1.0) / n - f;
        let below = f - i as f64 / n;
        d.max(above).max(below)
    })
}

/// KS test of `samples` against chi-squared(1), p-value from the
/// asymptotic Kolmogorov distribution at `λ = √n D`.
pub fn ks_test_chisq1(samples: &[f64]) -> Result<MonteCarloResult> {
    if samples.len() < MIN_KS_SAMPLES {
        return Err(Error::TooFewSamples {
            got: samples.len(),
            min: MIN_KS_SAMPLES,
        });
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("KS samples"));
    }
    let d = ks_statistic(samples, chisq1_cdf);
    let n = samples.len() as f64;
    Ok(MonteCarloResult {
        sample_count: samples.len(),
        ks_statistic: d,
        p_value: kolmogorov_tail(n.sqrt() * d),
        reference: CHISQ1_LABEL,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_reference_points() {
        // P(χ²₁ ≤ 3.841458820694124) = 0.95, P(χ²₁ ≤ 1) = P(|Z| ≤ 1)
        assert!((chisq1_cdf(3.841_458_820_694_124) - 0.95).abs() < 1e-12);
        assert!((chisq1_cdf(1.0) - 0.682_689_492_137_085_9).abs() < 1e-12);
        assert_eq!(chisq1_cdf(0.0), 0.0);
        assert_eq!(chisq1_cdf(-1.0), 0.0);
    }

    #[test]
    fn kolmogorov_tail_reference_points() {
        // Tabulated: Q(1.36) ≈ 0.0494, Q(1.63) ≈ 0.0098, Q(0.5) ≈ 0.9639
        assert!((kolmogorov_tail(1.36) - 0.0494).abs() < 1e-3);
        assert!((kolmogorov_tail(1.63) - 0.0098).abs() < 1e-3);
        assert!((kolmogorov_tail(0.5) - 0.9639).abs() < 1e-3);
        assert_eq!(kolmogorov_tail(0.0), 1.0);
        assert!(kolmogorov_tail(10.0) < 1e-80);
    }

    #[test]
    fn statistic_for_known_sample() {
        // uniform CDF on [0,1], points 0.1..0.9 step 0.2 plus 1.0 hand-checked
        let s = [0.1, 0.3, 0.5, 0.7, 0.9];
        let d = ks_statistic(&s, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.1).abs() < 1e-15);
    }

    #[test]
    fn constant_sample_is_rejected() {
        let r = ks_test_chisq1(&[1.0; 500]).unwrap();
        assert!(r.ks_statistic > 0.3);
        assert!(r.p_value < 1e-6);
        assert_eq!(r.verdict(), Verdict::Reject);
        assert!((0.0..=1.0).contains(&r.ks_statistic));
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            ks_test_chisq1(&[1.0; 99]),
            Err(Error::TooFewSamples { got: 99, min: 100 })
        ));
    }
}
