//! Householder QR and the least-squares solve built on it.

use super::matrix::{dot, norm, Matrix};
use crate::error::{Error, Result};

/// Relative rank tolerance: a diagonal entry of `R` at or below
/// `RANK_TOL * max column norm` marks the design rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// Thin Householder factorization `A = Q R` of an `n x p` matrix, `n >= p`.
#[derive(Debug, Clone)]
pub struct Qr {
    /// Householder vectors, one per column, each of length `n - k`.
    reflectors: Vec<Vec<f64>>,
    r: Matrix,
    n: usize,
    col_scale: f64,
}

impl Qr {
    pub fn decompose(a: &Matrix) -> Result<Qr> {
        let (n, p) = a.shape();
        if n < p {
            return Err(Error::ShapeMismatch(format!(
                "QR needs at least as many rows as columns, got {n}x{p}"
            )));
        }
        let col_scale = (0..p).map(|j| norm(&a.column(j))).fold(0.0, f64::max);
        let mut work = a.clone();
        let mut reflectors = Vec::with_capacity(p);
        for k in 0..p {
            let mut v: Vec<f64> = (k..n).map(|i| work[(i, k)]).collect();
            let alpha = norm(&v);
            let alpha = if v[0] > 0.0 { -alpha } else { alpha };
            v[0] -= alpha;
            let vv = dot(&v, &v);
            if vv > 0.0 {
                for j in k..p {
                    let s = 2.0 * (k..n).map(|i| v[i - k] * work[(i, j)]).sum::<f64>() / vv;
                    for i in k..n {
                        work[(i, j)] -= s * v[i - k];
                    }
                }
            }
            reflectors.push(v);
        }
        let r = Matrix::from_fn(p, p, |i, j| if j >= i { work[(i, j)] } else { 0.0 });
        Ok(Qr {
            reflectors,
            r,
            n,
            col_scale,
        })
    }

    /// Upper-triangular factor (`p x p`).
    pub fn r(&self) -> &Matrix {
        &self.r
    }

    /// Number of diagonal entries of `R` above the rank tolerance.
    pub fn rank(&self) -> usize {
        let tol = RANK_TOL * self.col_scale;
        (0..self.r.cols())
            .filter(|&k| self.r[(k, k)].abs() > tol)
            .count()
    }

    /// Applies `Qᵀ` to a length-`n` vector in place.
    pub fn apply_qt(&self, y: &mut [f64]) {
        assert_eq!(y.len(), self.n);
        for (k, v) in self.reflectors.iter().enumerate() {
            let vv = dot(v, v);
            if vv == 0.0 {
                continue;
            }
            let s = 2.0 * dot(v, &y[k..]) / vv;
            for (yi, vi) in y[k..].iter_mut().zip(v) {
                *yi -= s * vi;
            }
        }
    }

    /// Applies `Q` to a length-`n` vector in place.
    pub fn apply_q(&self, y: &mut [f64]) {
        assert_eq!(y.len(), self.n);
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            let vv = dot(v, v);
            if vv == 0.0 {
                continue;
            }
            let s = 2.0 * dot(v, &y[k..]) / vv;
            for (yi, vi) in y[k..].iter_mut().zip(v) {
                *yi -= s * vi;
            }
        }
    }

    /// The thin orthonormal factor (`n x p`).
    pub fn thin_q(&self) -> Matrix {
        let p = self.r.cols();
        let mut q = Matrix::zeros(self.n, p);
        for j in 0..p {
            let mut e = vec![0.0; self.n];
            e[j] = 1.0;
            self.apply_q(&mut e);
            for i in 0..self.n {
                q[(i, j)] = e[i];
            }
        }
        q
    }
}

/// Solves `R z = b` for upper-triangular `R`.
pub fn solve_upper(r: &Matrix, b: &[f64]) -> Vec<f64> {
    let p = r.cols();
    let mut z = b.to_vec();
    for i in (0..p).rev() {
        let s: f64 = ((i + 1)..p).map(|j| r[(i, j)] * z[j]).sum();
        z[i] = (z[i] - s) / r[(i, i)];
    }
    z
}

/// Solves `Rᵀ z = b` for upper-triangular `R`.
pub fn solve_upper_transposed(r: &Matrix, b: &[f64]) -> Vec<f64> {
    let p = r.cols();
    let mut z = b.to_vec();
    for i in 0..p {
        let s: f64 = (0..i).map(|j| r[(j, i)] * z[j]).sum();
        z[i] = (z[i] - s) / r[(i, i)];
    }
    z
}

/// Output of [`lstsq_solve`].
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub beta: Vec<f64>,
    /// `(XᵀX)⁻¹ = R⁻¹ R⁻ᵀ`, symmetrized.
    pub xtx_inverse: Matrix,
    /// Factorization of `X`; `XᵀX = RᵀR`.
    pub qr: Qr,
}

/// Least-squares solve of `X β ≈ y` through Householder QR.
///
/// `(XᵀX)⁻¹` is formed from the inverse of the triangular factor, never by
/// inverting the cross-product matrix.
///
/// ```
/// use influence::{numerics::lstsq_solve, Matrix};
/// let x = Matrix::new(5, 1, vec![1.0; 5]).unwrap();
/// let ls = lstsq_solve(&x, &[3.0; 5]).unwrap();
/// assert!((ls.beta[0] - 3.0).abs() < 1e-15);
/// ```
pub fn lstsq_solve(x: &Matrix, y: &[f64]) -> Result<LeastSquares> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "response has length {} but design has {n} rows",
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("response vector"));
    }
    let qr = Qr::decompose(x)?;
    let rank = qr.rank();
    if rank < p {
        return Err(Error::RankDeficient { rank, cols: p });
    }
    let mut qty = y.to_vec();
    qr.apply_qt(&mut qty);
    let r = qr.r();
    let beta = solve_upper(r, &qty[..p]);

    // R⁻¹ column by column, then R⁻¹ R⁻ᵀ.
    let mut r_inv = Matrix::zeros(p, p);
    for j in 0..p {
        let mut e = vec![0.0; p];
        e[j] = 1.0;
        let col = solve_upper(r, &e);
        for i in 0..p {
            r_inv[(i, j)] = col[i];
        }
    }
    let mut xtx_inverse = r_inv.matmul(&r_inv.transpose());
    for i in 0..p {
        for j in (i + 1)..p {
            let avg = 0.5 * (xtx_inverse[(i, j)] + xtx_inverse[(j, i)]);
            xtx_inverse[(i, j)] = avg;
            xtx_inverse[(j, i)] = avg;
        }
    }
    Ok(LeastSquares {
        beta,
        xtx_inverse,
        qr,
    })
}
