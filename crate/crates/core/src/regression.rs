//! Ordinary least-squares fit and the per-observation quantities every
//! deletion diagnostic is built from.
//!
//! All observation indices accepted by this module (and the rest of the
//! public API) are 1-based.

use crate::error::{Error, Result};
use crate::numerics::{dot, lstsq_solve, solve_upper, solve_upper_transposed, Matrix};

/// Leverages at or above `1 - EPS_LEVERAGE` are rejected by every
/// diagnostic that divides by `1 - h_ii`.
pub const EPS_LEVERAGE: f64 = 1e-8;

/// A fitted linear model `y = X β + ε`.
///
/// Immutable once built. The design and response are retained so the
/// deletion diagnostics can be computed (and cross-checked by refitting)
/// without re-supplying data.
#[derive(Debug, Clone)]
pub struct RegressionFit {
    x: Matrix,
    y: Vec<f64>,
    beta_hat: Vec<f64>,
    residuals: Vec<f64>,
    leverage: Vec<f64>,
    sigma2_hat: f64,
    xtx_inverse: Matrix,
    r: Matrix,
}

impl RegressionFit {
    /// Fits `y` on the columns of `x` by Householder least squares.
    ///
    /// Needs `n > p`. A fit with zero residual sum of squares is accepted,
    /// but everything scaled by `σ̂²` then fails with
    /// [`Error::ZeroVariance`].
    ///
    /// ```
    /// use influence::{Matrix, RegressionFit};
    /// let x = Matrix::new(3, 1, vec![1.0; 3]).unwrap();
    /// let fit = RegressionFit::fit(&x, &[1.0, 2.0, 3.0]).unwrap();
    /// assert!((fit.beta_hat()[0] - 2.0).abs() < 1e-15);
    /// assert!((fit.sigma2_hat() - 1.0).abs() < 1e-15);
    /// ```
    pub fn fit(x: &Matrix, y: &[f64]) -> Result<RegressionFit> {
        let (n, p) = x.shape();
        if y.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "response has length {} but design has {n} rows",
                y.len()
            )));
        }
        if n <= p {
            return Err(Error::DegenerateResidual { n, p });
        }
        let ls = lstsq_solve(x, y)?;

        // e = Q [0; (Qᵀy)_{p..n}] keeps Xᵀe at rounding level.
        let mut e = y.to_vec();
        ls.qr.apply_qt(&mut e);
        e[..p].iter_mut().for_each(|v| *v = 0.0);
        ls.qr.apply_q(&mut e);

        let r = ls.qr.r().clone();
        let leverage = (0..n)
            .map(|i| {
                let z = solve_upper_transposed(&r, x.row(i));
                dot(&z, &z)
            })
            .collect();
        let sigma2_hat = dot(&e, &e) / (n - p) as f64;

        Ok(RegressionFit {
            x: x.clone(),
            y: y.to_vec(),
            beta_hat: ls.beta,
            residuals: e,
            leverage,
            sigma2_hat,
            xtx_inverse: ls.xtx_inverse,
            r,
        })
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn p(&self) -> usize {
        self.x.cols()
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn beta_hat(&self) -> &[f64] {
        &self.beta_hat
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// Diagonal of the hat matrix.
    pub fn leverage(&self) -> &[f64] {
        &self.leverage
    }

    /// `eᵀe / (n - p)`.
    pub fn sigma2_hat(&self) -> f64 {
        self.sigma2_hat
    }

    pub fn xtx_inverse(&self) -> &Matrix {
        &self.xtx_inverse
    }

    /// Upper-triangular factor `R` with `XᵀX = RᵀR`.
    pub fn r_factor(&self) -> &Matrix {
        &self.r
    }

    /// Cross-product matrix `XᵀX`.
    pub fn xtx(&self) -> Matrix {
        self.x.gram()
    }

    /// Converts a 1-based observation index to a 0-based row.
    pub fn row_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            });
        }
        Ok(i - 1)
    }

    /// `xᵢ`, the i-th row of the design.
    pub fn x_row(&self, i: usize) -> Result<&[f64]> {
        Ok(self.x.row(self.row_index(i)?))
    }

    pub fn residual(&self, i: usize) -> Result<f64> {
        Ok(self.residuals[self.row_index(i)?])
    }

    pub fn leverage_at(&self, i: usize) -> Result<f64> {
        Ok(self.leverage[self.row_index(i)?])
    }

    /// `(XᵀX)⁻¹ xᵢ`, through two triangular solves.
    pub fn xtx_inv_x(&self, i: usize) -> Result<Vec<f64>> {
        let xi = self.x_row(i)?;
        let z = solve_upper_transposed(&self.r, xi);
        Ok(solve_upper(&self.r, &z))
    }

    /// Leverage of observation `i`, checked against the `1 - EPS_LEVERAGE`
    /// guard.
    pub fn checked_leverage(&self, i: usize) -> Result<f64> {
        let h = self.leverage_at(i)?;
        if h >= 1.0 - EPS_LEVERAGE {
            return Err(Error::LeverageOne { index: i, leverage: h });
        }
        Ok(h)
    }

    pub(crate) fn checked_sigma2(&self) -> Result<f64> {
        if self.sigma2_hat > 0.0 {
            Ok(self.sigma2_hat)
        } else {
            Err(Error::ZeroVariance)
        }
    }
}

/// Convenience wrapper for [`RegressionFit::fit`].
pub fn fit(x: &Matrix, y: &[f64]) -> Result<RegressionFit> {
    RegressionFit::fit(x, y)
}

/// Internally studentized residual `eᵢ / (σ̂ √(1 - hᵢᵢ))`.
pub fn studentized(fit: &RegressionFit, i: usize) -> Result<f64> {
    let h = fit.checked_leverage(i)?;
    let e = fit.residual(i)?;
    let s2 = fit.checked_sigma2()?;
    Ok(e / (s2 * (1.0 - h)).sqrt())
}
