//! General Moore-Penrose pseudoinverse through a one-sided Jacobi SVD.
//!
//! This path shares no code with the symmetric eigensolver or the rank-one
//! closed form used by the deletion diagnostics, so it can serve as an
//! independent reference for both.

#![allow(clippy::needless_range_loop)]

use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Pseudoinverse `M` of an arbitrary finite matrix `S`.
///
/// Singular values at or below `max(rows, cols) * eps * sigma_max` are
/// treated as zero.
///
/// ```
/// use influence::{numerics::pseudoinverse_oracle, Matrix};
/// let z = pseudoinverse_oracle(&Matrix::zeros(2, 3)).unwrap();
/// assert_eq!(z.shape(), (3, 2));
/// assert_eq!(z.max_abs(), 0.0);
/// ```
pub fn pseudoinverse_oracle(s: &Matrix) -> Result<Matrix> {
    if s.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("pseudoinverse input"));
    }
    if s.rows() < s.cols() {
        return Ok(pseudoinverse_tall(&s.transpose()).transpose());
    }
    Ok(pseudoinverse_tall(s))
}

/// `rows >= cols` case. Columns of `work` are rotated until mutually
/// orthogonal; then `work = U Σ` and the accumulated rotations form `V`.
fn pseudoinverse_tall(s: &Matrix) -> Matrix {
    let (m, k) = s.shape();
    let mut cols: Vec<Vec<f64>> = (0..k).map(|j| s.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..k)
        .map(|j| (0..k).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                for i in 0..m {
                    let a = cols[p][i];
                    let b = cols[q][i];
                    cols[p][i] = c * a - sn * b;
                    cols[q][i] = sn * a + c * b;
                }
                for i in 0..k {
                    let a = v[p][i];
                    let b = v[q][i];
                    v[p][i] = c * a - sn * b;
                    v[q][i] = sn * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = (m.max(k) as f64) * f64::EPSILON * sigma_max;

    // M = Σ_j v_j u_jᵀ / σ_j with u_j = col_j / σ_j.
    let mut out = Matrix::zeros(k, m);
    for j in 0..k {
        if sigma[j] <= cutoff || sigma[j] == 0.0 {
            continue;
        }
        let inv2 = 1.0 / (sigma[j] * sigma[j]);
        for r in 0..k {
            let vr = v[j][r] * inv2;
            if vr == 0.0 {
                continue;
            }
            for c in 0..m {
                out[(r, c)] += vr * cols[j][c];
            }
        }
    }
    out
}

/// Largest violation of the four Penrose conditions, each divided by the
/// Frobenius norm of the quantity it is compared with (or 1 when that is
/// zero).
pub fn penrose_violation(s: &Matrix, m: &Matrix) -> f64 {
    let sm = s.matmul(m);
    let ms = m.matmul(s);
    let rel = |a: &Matrix, b: &Matrix| {
        let d = a.sub(b).frobenius_norm();
        let scale = b.frobenius_norm();
        if scale > 0.0 {
            d / scale
        } else {
            d
        }
    };
    let c1 = rel(&sm.matmul(s), s);
    let c2 = rel(&ms.matmul(m), m);
    let c3 = rel(&sm.transpose(), &sm);
    let c4 = rel(&ms.transpose(), &ms);
    c1.max(c2).max(c3).max(c4)
}
