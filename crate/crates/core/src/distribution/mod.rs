//! Distributional checks on the deletion shift `Δβᵢ`.
//!
//! Under normal errors `Δβᵢ/σ ~ N_p(0, Ω)` with `Ω = Vᵢ/(1 - hᵢᵢ)`. The
//! quadratic form `ΔβᵢᵀXᵀXΔβᵢ/σ²` is chi-squared with `r` degrees of
//! freedom iff `ΩAΩAΩ = ΩAΩ` and `tr(AΩ) = r` for `A = XᵀX`. Here
//!
//! ```text
//! ΩAΩAΩ = h²/(1-h)³ Vᵢ,   ΩAΩ = h/(1-h)² Vᵢ,   tr(AΩ) = h/(1-h)
//! ```
//!
//! so both conditions hold only at `hᵢᵢ = 1/2` (with `r = 1`). This module
//! evaluates the conditions by explicit matrix arithmetic, simulates the
//! quadratic form, tests it against chi-squared(1), and checks that
//! samples of `Δβᵢ` lie on the line spanned by `(XᵀX)⁻¹xᵢ`.

mod ks;
mod rng;

pub use ks::{
    chisq1_cdf, kolmogorov_tail, ks_statistic, ks_test_chisq1, MonteCarloResult, Verdict,
    CHISQ1_LABEL, KOLMOGOROV_TERMS, MIN_KS_SAMPLES, PASS_P, REJECT_P,
};
pub use rng::NormalStream;

use crate::deletion::{orthogonal_component_norm, v_matrix, DeletionCase};
use crate::error::{Error, Result};
use crate::numerics::{dot, norm, spectral, Matrix};
use crate::regression::RegressionFit;

/// Tolerance on both chi-squared conditions.
pub const CONDITION_TOL: f64 = 1e-8;

/// Allowed relative gap between the explicit products and their closed
/// forms before a condition report is trusted.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

/// Eigenvalues of `Ω` below this fraction of the largest count as zero.
const NULL_EIGEN_TOL: f64 = 1e-10;

/// Both chi-squared conditions for one observation.
#[derive(Debug, Clone)]
pub struct ChiSquareCondition {
    pub i: usize,
    pub h: f64,
    /// `Ω = Vᵢ / (1 - hᵢᵢ)`.
    pub omega: Matrix,
    /// `A = XᵀX`.
    pub a_matrix: Matrix,
    /// `‖ΩAΩAΩ - ΩAΩ‖_F / ‖ΩAΩ‖_F`.
    pub condition1_residual: f64,
    /// `tr(AΩ)`.
    pub trace_value: f64,
    /// Largest relative gap between the explicit products and the closed
    /// forms `h²/(1-h)³ Vᵢ` and `h/(1-h)² Vᵢ`.
    pub closed_form_error: f64,
    pub satisfied: bool,
}

impl ChiSquareCondition {
    /// Degrees of freedom `r` when the trace condition holds.
    pub fn degrees_of_freedom(&self) -> Option<u64> {
        let r = self.trace_value.round();
        ((self.trace_value - r).abs() <= CONDITION_TOL && r >= 1.0).then_some(r as u64)
    }
}

fn relative_gap(a: &Matrix, b: &Matrix) -> f64 {
    a.sub(b).frobenius_norm() / b.frobenius_norm().max(f64::MIN_POSITIVE)
}

/// Evaluates both chi-squared conditions for observation `i`.
pub fn lemma1_condition(fit: &RegressionFit, i: usize) -> Result<ChiSquareCondition> {
    let h = fit.checked_leverage(i)?;
    let v = v_matrix(fit, i)?;
    let omega = v.scale(1.0 / (1.0 - h));
    let a = fit.xtx();

    let oa = omega.matmul_compensated(&a);
    let oao = oa.matmul_compensated(&omega);
    let oaoao = oa.matmul_compensated(&oao);

    let err5 = relative_gap(&oaoao, &v.scale(h * h / (1.0 - h).powi(3)));
    let err3 = relative_gap(&oao, &v.scale(h / (1.0 - h).powi(2)));
    let closed_form_error = err5.max(err3);
    if closed_form_error > CLOSED_FORM_TOL {
        let what = if err5 >= err3 {
            "ΩAΩAΩ = h²/(1-h)³ V"
        } else {
            "ΩAΩ = h/(1-h)² V"
        };
        return Err(Error::IdentityCheck {
            what,
            error: closed_form_error,
        }
        .at(i));
    }

    let condition1_residual = relative_gap(&oaoao, &oao);
    let trace_value = a.matmul_compensated(&omega).trace();
    let r = trace_value.round();
    let satisfied = condition1_residual <= CONDITION_TOL
        && (trace_value - r).abs() <= CONDITION_TOL
        && r >= 1.0;

    Ok(ChiSquareCondition {
        i,
        h,
        omega,
        a_matrix: a,
        condition1_residual,
        trace_value,
        closed_form_error,
        satisfied,
    })
}

/// Design with one predictor and three observations whose first leverage
/// is `h`: `x = (√h, √((1-h)/2), √((1-h)/2))`, with a fixed response that
/// leaves nonzero residuals.
pub fn synthetic_design(h: f64) -> Result<(Matrix, Vec<f64>)> {
    check_leverage(h)?;
    let rest = (0.5 * (1.0 - h)).sqrt();
    let x = Matrix::new(3, 1, vec![h.sqrt(), rest, rest])?;
    Ok((x, vec![1.0, 2.0, -1.0]))
}

/// Fit of [`synthetic_design`]; observation 1 carries leverage `h`.
pub fn synthetic_fit(h: f64) -> Result<RegressionFit> {
    let (x, y) = synthetic_design(h)?;
    RegressionFit::fit(&x, &y)
}

/// [`lemma1_condition`] for observation 1 of the synthetic design at `h`.
pub fn chisq_condition_at_leverage(h: f64) -> Result<ChiSquareCondition> {
    lemma1_condition(&synthetic_fit(h)?, 1)
}

fn check_leverage(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidLeverage(h))
    }
}

/// Samples of `Q = ΔβᵀXᵀXΔβ/σ²` for an observation of leverage `h`,
/// using the rank-one reduction `Q = (h/(1-h)) Z²`, one normal draw per
/// sample from `NormalStream::new(seed)`.
///
/// ```
/// use influence::distribution::simulate_quadratic_form;
/// let q = simulate_quadratic_form(0.5, 1000, 7).unwrap();
/// assert_eq!(q.len(), 1000);
/// assert!(q.iter().all(|&v| v >= 0.0));
/// ```
pub fn simulate_quadratic_form(h: f64, sample_count: usize, seed: u64) -> Result<Vec<f64>> {
    check_leverage(h)?;
    if sample_count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let scale = h / (1.0 - h);
    Ok(NormalStream::new(seed)
        .take(sample_count)
        .map(|z| scale * z * z)
        .collect())
}

/// The same samples through the full `p`-dimensional path: draw
/// `Δβ/σ = Z √(λ/(1-h)) u` along the unit eigenvector `u` of `Vᵢ` (eigenvalue
/// `λ`), then evaluate the matrix quadratic form with `XᵀX`. Consumes the
/// normal stream exactly like [`simulate_quadratic_form`].
pub fn simulate_quadratic_form_full(
    fit: &RegressionFit,
    i: usize,
    sample_count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let case = DeletionCase::new(fit, i)?;
    let h = case.leverage;
    let len = norm(&case.v_eigvec);
    if len == 0.0 {
        return Err(Error::InvalidLeverage(h));
    }
    let u: Vec<f64> = case.v_eigvec.iter().map(|c| c / len).collect();
    let step = (case.v_eigenvalue / (1.0 - h)).sqrt();
    let a = fit.xtx();
    Ok(NormalStream::new(seed)
        .take(sample_count)
        .map(|z| {
            let d: Vec<f64> = u.iter().map(|uk| z * step * uk).collect();
            dot(&d, &a.matvec(&d))
        })
        .collect())
}

/// Simulates at leverage `h` and runs the KS test against chi-squared(1).
pub fn simulate_and_test(h: f64, sample_count: usize, seed: u64) -> Result<(f64, MonteCarloResult)> {
    let samples = simulate_quadratic_form(h, sample_count, seed)?;
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let mut result = ks_test_chisq1(&samples)?;
    result.seed = Some(seed);
    Ok((mean, result))
}

/// Draws `Δβᵢ ~ N_p(0, σ̂² Vᵢ/(1-hᵢᵢ))` through the spectral decomposition of
/// the covariance, giving randomness only to directions with nonzero
/// eigenvalue, and returns the largest relative norm of a sample's
/// component orthogonal to `(XᵀX)⁻¹xᵢ`.
pub fn column_space_check(
    fit: &RegressionFit,
    i: usize,
    sample_count: usize,
    seed: u64,
) -> Result<f64> {
    let case = DeletionCase::new(fit, i)?;
    let s2 = if fit.sigma2_hat() > 0.0 {
        fit.sigma2_hat()
    } else {
        1.0
    };
    let cov = v_matrix(fit, i)?.scale(s2 / (1.0 - case.leverage));
    let eig = spectral(&cov)?;
    let top = eig.eigenvalues[0];
    let active: Vec<(f64, Vec<f64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(_, &l)| top > 0.0 && l > NULL_EIGEN_TOL * top)
        .map(|(k, &l)| (l.sqrt(), eig.eigenvector(k)))
        .collect();

    let p = fit.p();
    let mut stream = NormalStream::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..sample_count {
        let mut d = vec![0.0; p];
        for (sd, g) in &active {
            let z = stream.next_normal();
            for (dk, gk) in d.iter_mut().zip(g) {
                *dk += sd * z * gk;
            }
        }
        let len = norm(&d);
        if len > 0.0 {
            worst = worst.max(orthogonal_component_norm(&d, &case.v_eigvec) / len);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_design_hits_target_leverage() {
        for k in 1..10 {
            let h = k as f64 / 10.0;
            let f = synthetic_fit(h).unwrap();
            assert!((f.leverage()[0] - h).abs() < 1e-14);
            assert!(f.sigma2_hat() > 0.0);
        }
    }

    #[test]
    fn exact_case_at_one_half() {
        let c = chisq_condition_at_leverage(0.5).unwrap();
        assert!(c.condition1_residual <= 1e-8);
        assert!((c.trace_value - 1.0).abs() < 1e-12);
        assert!(c.satisfied);
        assert_eq!(c.degrees_of_freedom(), Some(1));
    }

    #[test]
    fn one_third_fails_trace() {
        let c = chisq_condition_at_leverage(1.0 / 3.0).unwrap();
        assert!((c.trace_value - 0.5).abs() < 1e-12);
        assert!(!c.satisfied);
        assert_eq!(c.degrees_of_freedom(), None);
    }

    #[test]
    fn two_thirds_has_integer_trace_but_fails_condition_one() {
        let c = chisq_condition_at_leverage(2.0 / 3.0).unwrap();
        assert!((c.trace_value - 2.0).abs() < 1e-12);
        assert_eq!(c.degrees_of_freedom(), Some(2));
        // closed form: |h/(1-h) - 1| = 1
        assert!((c.condition1_residual - 1.0).abs() < 1e-9);
        assert!(!c.satisfied);
    }

    #[test]
    fn invalid_leverages() {
        for h in [0.0, 1.0, -0.1, 1.2, f64::NAN] {
            assert!(matches!(
                simulate_quadratic_form(h, 10, 1),
                Err(Error::InvalidLeverage(_))
            ));
        }
        assert!(simulate_quadratic_form(0.5, 0, 1).is_err());
    }

    #[test]
    fn simulated_means() {
        let q = simulate_quadratic_form(0.5, 1_000_000, 11).unwrap();
        let mean = q.iter().sum::<f64>() / q.len() as f64;
        assert!((0.99..=1.01).contains(&mean), "{mean}");
        let q = simulate_quadratic_form(1.0 / 3.0, 1_000_000, 12).unwrap();
        let mean = q.iter().sum::<f64>() / q.len() as f64;
        assert!((mean - 0.5).abs() <= 0.01, "{mean}");
    }

    #[test]
    fn single_predictor_column_space_is_exact() {
        let f = synthetic_fit(0.4).unwrap();
        for i in 1..=3 {
            assert_eq!(column_space_check(&f, i, 1000, 5).unwrap(), 0.0);
        }
    }
}
