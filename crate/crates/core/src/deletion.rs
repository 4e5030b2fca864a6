//! Single-case deletion diagnostics.
//!
//! Deleting observation `i` moves the least-squares estimate by
//!
//! ```text
//! Δβᵢ = β̂ - β̂₍ᵢ₎ = (XᵀX)⁻¹ xᵢ eᵢ / (1 - hᵢᵢ)
//! ```
//!
//! whose covariance `σ² Vᵢ / (1 - hᵢᵢ)` has rank one:
//! `Vᵢ = (XᵀX)⁻¹ xᵢ xᵢᵀ (XᵀX)⁻¹` has the single nonzero eigenvalue
//! `‖(XᵀX)⁻¹xᵢ‖²` with eigenvector `(XᵀX)⁻¹xᵢ`. Every quantity below is a
//! different way of turning `Δβᵢ` into a scalar:
//!
//! * [`normalized_distance`]: `Δβᵢ` normalized by the pseudoinverse of its
//!   own covariance, which collapses to the squared studentized residual;
//! * [`cooks_distance`]: `Δβᵢ` scaled by `XᵀX`, and its per-axis
//!   breakdown along the eigenvectors of `XᵀX` in [`cook_decomposition`];
//! * [`k_statistic`]: the signed coordinate of `Δβᵢ` along the only axis on
//!   which it can actually vary.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{dot, lstsq_solve, norm, pseudoinverse_oracle, spectral, Matrix, Qr, SpectralDecomp};
use crate::regression::RegressionFit;

/// Relative tolerance under which two influence values count as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Threshold below which `Vᵢ` is treated as the zero matrix.
const ZERO_ROW_TOL: f64 = 1e-14;

/// Per-observation deletion artifacts.
#[derive(Debug, Clone, PartialEq)]
pub struct DeletionCase {
    /// 1-based observation index.
    pub i: usize,
    /// `β̂ - β̂₍ᵢ₎`.
    pub delta_beta: Vec<f64>,
    /// `xᵢᵀ(XᵀX)⁻²xᵢ`, the only nonzero eigenvalue of `Vᵢ`.
    pub v_eigenvalue: f64,
    /// `(XᵀX)⁻¹xᵢ`, unnormalized.
    pub v_eigvec: Vec<f64>,
    pub leverage: f64,
}

impl DeletionCase {
    pub fn new(fit: &RegressionFit, i: usize) -> Result<DeletionCase> {
        let leverage = fit.checked_leverage(i)?;
        let e = fit.residual(i)?;
        let v_eigvec = fit.xtx_inv_x(i)?;
        let scale = e / (1.0 - leverage);
        Ok(DeletionCase {
            i,
            delta_beta: v_eigvec.iter().map(|c| c * scale).collect(),
            v_eigenvalue: dot(&v_eigvec, &v_eigvec),
            v_eigvec,
            leverage,
        })
    }

    /// Norm of the part of `Δβᵢ` orthogonal to `(XᵀX)⁻¹xᵢ`.
    pub fn orthogonal_residual(&self) -> f64 {
        orthogonal_component_norm(&self.delta_beta, &self.v_eigvec)
    }
}

/// `‖v - (v·û)û‖` for the unit vector `û` along `axis` (`‖v‖` when `axis`
/// is zero).
pub fn orthogonal_component_norm(v: &[f64], axis: &[f64]) -> f64 {
    let len = norm(axis);
    if len == 0.0 {
        return norm(v);
    }
    let unit: Vec<f64> = axis.iter().map(|a| a / len).collect();
    let c = dot(v, &unit);
    let rest: Vec<f64> = v.iter().zip(&unit).map(|(x, u)| x - c * u).collect();
    norm(&rest)
}

/// `β̂ - β̂₍ᵢ₎` by the closed-form deletion identity, without refitting.
///
/// ```
/// use influence::{deletion::delta_beta, Matrix, RegressionFit};
/// let x = Matrix::new(3, 1, vec![1.0; 3]).unwrap();
/// let fit = RegressionFit::fit(&x, &[1.0, 2.0, 3.0]).unwrap();
/// // mean of (1,2,3) minus mean of (1,2)
/// assert!((delta_beta(&fit, 3).unwrap()[0] - 0.5).abs() < 1e-14);
/// ```
pub fn delta_beta(fit: &RegressionFit, i: usize) -> Result<Vec<f64>> {
    Ok(DeletionCase::new(fit, i)?.delta_beta)
}

/// `β̂ - β̂₍ᵢ₎` by literally refitting without row `i`. Reference path for
/// [`delta_beta`].
pub fn delta_beta_bruteforce(fit: &RegressionFit, i: usize) -> Result<Vec<f64>> {
    let row = fit.row_index(i)?;
    if fit.n() - 1 < fit.p() {
        return Err(Error::RankDeficientAfterDeletion { index: i });
    }
    let x = fit.x().without_row(row);
    let y: Vec<f64> = fit
        .y()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != row)
        .map(|(_, &v)| v)
        .collect();
    let reduced = lstsq_solve(&x, &y).map_err(|e| match e {
        Error::RankDeficient { .. } => Error::RankDeficientAfterDeletion { index: i },
        other => other,
    })?;
    Ok(fit
        .beta_hat()
        .iter()
        .zip(&reduced.beta)
        .map(|(a, b)| a - b)
        .collect())
}

/// `Vᵢ = (XᵀX)⁻¹xᵢxᵢᵀ(XᵀX)⁻¹`.
pub fn v_matrix(fit: &RegressionFit, i: usize) -> Result<Matrix> {
    let c = fit.xtx_inv_x(i)?;
    Ok(Matrix::outer(&c, &c))
}

/// Moore-Penrose inverse of `Vᵢ`.
#[derive(Debug, Clone)]
pub struct VPseudoinverse {
    pub matrix: Matrix,
    /// Set when `xᵢ` is numerically zero; `matrix` is then the zero matrix,
    /// which is the exact pseudoinverse of `Vᵢ = 0`.
    pub degenerate: bool,
}

/// `Vᵢ⁺ = [xᵢᵀ(XᵀX)⁻²xᵢ]⁻² Vᵢ`.
pub fn v_pseudoinverse(fit: &RegressionFit, i: usize) -> Result<VPseudoinverse> {
    let c = fit.xtx_inv_x(i)?;
    let lambda = dot(&c, &c);
    let p = fit.p();
    if lambda <= ZERO_ROW_TOL * v_eigenvalue_bound(fit) {
        return Ok(VPseudoinverse {
            matrix: Matrix::zeros(p, p),
            degenerate: true,
        });
    }
    Ok(VPseudoinverse {
        matrix: Matrix::outer(&c, &c).scale(1.0 / (lambda * lambda)),
        degenerate: false,
    })
}

/// Upper bound on `‖(XᵀX)⁻¹xₖ‖²` over all rows.
fn v_eigenvalue_bound(fit: &RegressionFit) -> f64 {
    let inv = fit.xtx_inverse().frobenius_norm();
    let row = (0..fit.n())
        .map(|k| norm(fit.x().row(k)))
        .fold(0.0, f64::max);
    (inv * row).powi(2)
}

/// `eᵢ² / (σ̂² (1 - hᵢᵢ))`: `Δβᵢ` normalized by the pseudoinverse of its
/// estimated covariance, equal to the squared studentized residual.
pub fn normalized_distance(fit: &RegressionFit, i: usize) -> Result<f64> {
    let h = fit.checked_leverage(i)?;
    let s2 = fit.checked_sigma2()?;
    let e = fit.residual(i)?;
    Ok(e * e / (s2 * (1.0 - h)))
}

/// The same quantity evaluated as the matrix quadratic form
/// `Δβᵀ [ĉov(Δβ)]⁺ Δβ` with `[ĉov(Δβ)]⁺ = ((1 - h)/σ̂²) Vᵢ⁺`.
pub fn normalized_distance_quadratic_form(fit: &RegressionFit, i: usize) -> Result<f64> {
    let case = DeletionCase::new(fit, i)?;
    let s2 = fit.checked_sigma2()?;
    let pinv = v_pseudoinverse(fit, i)?;
    let cov_pinv = pinv.matrix.scale((1.0 - case.leverage) / s2);
    Ok(dot(&case.delta_beta, &cov_pinv.matvec(&case.delta_beta)))
}

/// Cook's distance `Dᵢ = (1/p) (hᵢᵢ/(1-hᵢᵢ)) eᵢ²/(σ̂²(1-hᵢᵢ))`.
pub fn cooks_distance(fit: &RegressionFit, i: usize) -> Result<f64> {
    let t2 = normalized_distance(fit, i)?;
    let h = fit.checked_leverage(i)?;
    Ok(t2 * h / (fit.p() as f64 * (1.0 - h)))
}

/// Cook's distance by its three algebraically equal expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CookForms {
    /// `(1/p) Δβᵀ [ĉov(β̂)]⁻¹ Δβ`, inverting `σ̂²(XᵀX)⁻¹` numerically.
    pub covariance_form: f64,
    /// `Δβᵀ XᵀX Δβ / (p σ̂²)`, evaluated as `‖XΔβ‖² / (p σ̂²)`.
    pub xtx_form: f64,
    /// Leverage-residual product; the value [`cooks_distance`] returns.
    pub leverage_form: f64,
}

pub fn cooks_distance_forms(fit: &RegressionFit, i: usize) -> Result<CookForms> {
    let case = DeletionCase::new(fit, i)?;
    let s2 = fit.checked_sigma2()?;
    let p = fit.p() as f64;
    let cov_inv = pseudoinverse_oracle(&fit.xtx_inverse().scale(s2))?;
    let covariance_form = dot(&case.delta_beta, &cov_inv.matvec(&case.delta_beta)) / p;
    let fitted_shift = fit.x().matvec(&case.delta_beta);
    let xtx_form = dot(&fitted_shift, &fitted_shift) / (p * s2);
    Ok(CookForms {
        covariance_form,
        xtx_form,
        leverage_form: cooks_distance(fit, i)?,
    })
}

/// `Kᵢ = (eᵢ/(1-hᵢᵢ)) ‖(XᵀX)⁻¹xᵢ‖`, signed like `eᵢ`.
///
/// `|Kᵢ| = ‖Δβᵢ‖`. It is unchanged when `X` is replaced by `XQ` for an
/// orthogonal `Q`, but not for a general nonsingular transformation; see
/// [`k_statistic_transformed`].
pub fn k_statistic(fit: &RegressionFit, i: usize) -> Result<f64> {
    let case = DeletionCase::new(fit, i)?;
    Ok(fit.residual(i)? / (1.0 - case.leverage) * norm(&case.v_eigvec))
}

/// `Kᵢ` of the untransformed design, recovered from the fit of `XA`.
///
/// For the transformed design `(X'ᵀX')⁻¹x'ᵢ = A⁻¹(XᵀX)⁻¹xᵢ` while `eᵢ` and
/// `hᵢᵢ` are unchanged, so the statistic uses `‖A (X'ᵀX')⁻¹x'ᵢ‖`.
pub fn k_statistic_transformed(
    transformed_fit: &RegressionFit,
    i: usize,
    a: &Matrix,
) -> Result<f64> {
    let p = transformed_fit.p();
    if a.shape() != (p, p) {
        return Err(Error::ShapeMismatch(format!(
            "transformation must be {p}x{p}, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if Qr::decompose(a)?.rank() < p {
        return Err(Error::SingularTransform);
    }
    let case = DeletionCase::new(transformed_fit, i)?;
    let original_axis = a.matvec(&case.v_eigvec);
    Ok(transformed_fit.residual(i)? / (1.0 - case.leverage) * norm(&original_axis))
}

/// Cook's distance split along the eigenvectors of `XᵀX`.
#[derive(Debug, Clone)]
pub struct CookDecomposition {
    pub i: usize,
    /// `l_k [(Δβ)ᵀg_k]² / (p σ̂²)` in descending-eigenvalue order.
    pub components: Vec<f64>,
    /// `(Δβ)ᵀg_k`.
    pub coordinates: Vec<f64>,
    pub eigen: SpectralDecomp,
    /// Leverage-residual Cook's distance, for comparison with the sum.
    pub cook_d: f64,
}

impl CookDecomposition {
    pub fn total(&self) -> f64 {
        self.components.iter().sum()
    }
}

pub fn cook_decomposition(fit: &RegressionFit, i: usize) -> Result<CookDecomposition> {
    let cook_d = cooks_distance(fit, i)?;
    let s2 = fit.checked_sigma2()?;
    let case = DeletionCase::new(fit, i)?;
    let eigen = spectral(&fit.xtx())?;
    let p = fit.p() as f64;
    let coordinates: Vec<f64> = (0..fit.p())
        .map(|k| dot(&case.delta_beta, &eigen.eigenvector(k)))
        .collect();
    let components = coordinates
        .iter()
        .zip(&eigen.eigenvalues)
        .map(|(c, l)| l * c * c / (p * s2))
        .collect();
    Ok(CookDecomposition {
        i,
        components,
        coordinates,
        eigen,
        cook_d,
    })
}

/// One line of the diagnostics report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    pub i: usize,
    #[serde(rename = "e")]
    pub e_i: f64,
    #[serde(rename = "h")]
    pub h_ii: f64,
    pub t2: f64,
    pub cook_d: f64,
    pub k: f64,
}

impl DiagnosticsRow {
    pub fn new(fit: &RegressionFit, i: usize) -> Result<DiagnosticsRow> {
        Ok(DiagnosticsRow {
            i,
            e_i: fit.residual(i)?,
            h_ii: fit.checked_leverage(i)?,
            t2: normalized_distance(fit, i)?,
            cook_d: cooks_distance(fit, i)?,
            k: k_statistic(fit, i)?,
        })
    }
}

/// Diagnostics for every observation, in observation order.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsTable {
    pub rows: Vec<DiagnosticsRow>,
}

impl DiagnosticsTable {
    /// Observation indices ordered by decreasing `|Kᵢ|`.
    pub fn order_by_abs_k(&self) -> Vec<usize> {
        influence_order(&self.rows, |r| r.k.abs())
    }

    /// Observation indices ordered by decreasing `Dᵢ`.
    pub fn order_by_cook(&self) -> Vec<usize> {
        influence_order(&self.rows, |r| r.cook_d)
    }

    pub fn argmax_abs_k(&self) -> usize {
        self.order_by_abs_k()[0]
    }

    pub fn argmax_cook(&self) -> usize {
        self.order_by_cook()[0]
    }

    pub fn row(&self, i: usize) -> Option<&DiagnosticsRow> {
        self.rows.iter().find(|r| r.i == i)
    }
}

/// Descending order by `key`; values within [`TIE_TOL`] of the head of
/// their run are ordered by ascending index.
fn influence_order(rows: &[DiagnosticsRow], key: impl Fn(&DiagnosticsRow) -> f64) -> Vec<usize> {
    let mut keyed: Vec<(f64, usize)> = rows.iter().map(|r| (key(r), r.i)).collect();
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut out = Vec::with_capacity(keyed.len());
    let mut start = 0;
    while start < keyed.len() {
        let head = keyed[start].0;
        let tol = TIE_TOL * head.abs().max(1.0);
        let mut end = start + 1;
        while end < keyed.len() && head - keyed[end].0 <= tol {
            end += 1;
        }
        let mut run: Vec<usize> = keyed[start..end].iter().map(|&(_, i)| i).collect();
        run.sort_unstable();
        out.extend(run);
        start = end;
    }
    out
}

/// Builds the full report. Rows are independent; errors carry the index of
/// the first failing observation.
pub fn diagnostics_table(fit: &RegressionFit) -> Result<DiagnosticsTable> {
    let rows = (1..=fit.n())
        .map(|i| DiagnosticsRow::new(fit, i).map_err(|e| e.at(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticsTable { rows })
}
