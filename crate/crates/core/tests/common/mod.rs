//! Test-only reference computations, independent of the library's own
//! solver and eigensolver paths.

#![allow(dead_code, clippy::needless_range_loop)]

use influence::distribution::NormalStream;
use influence::numerics::Qr;
use influence::Matrix;

pub fn rel_err(got: f64, want: f64) -> f64 {
    let scale = got.abs().max(want.abs());
    if scale == 0.0 {
        0.0
    } else {
        (got - want).abs() / scale
    }
}

/// Max componentwise error relative to the larger vector norm.
pub fn vec_rel_err(got: &[f64], want: &[f64]) -> f64 {
    assert_eq!(got.len(), want.len());
    let scale = influence::numerics::norm(got).max(influence::numerics::norm(want));
    if scale == 0.0 {
        return 0.0;
    }
    got.iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Gaussian elimination with full pivoting on a dense square system.
pub fn full_pivot_solve(a: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = a.rows();
    assert_eq!(a.cols(), n);
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pr, mut pc, mut best) = (k, k, 0.0);
        for i in k..n {
            for j in k..n {
                if m[i][j].abs() > best {
                    best = m[i][j].abs();
                    pr = i;
                    pc = j;
                }
            }
        }
        assert!(best > 0.0, "singular system");
        m.swap(k, pr);
        rhs.swap(k, pr);
        for row in m.iter_mut() {
            row.swap(k, pc);
        }
        perm.swap(k, pc);
        for i in (k + 1)..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
            rhs[i] -= f * rhs[k];
        }
    }
    let mut z = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| m[i][j] * z[j]).sum();
        z[i] = (rhs[i] - s) / m[i][i];
    }
    let mut x = vec![0.0; n];
    for (k, &p) in perm.iter().enumerate() {
        x[p] = z[k];
    }
    x
}

/// Normal-equation least squares through [`full_pivot_solve`].
pub fn normal_equations_beta(x: &Matrix, y: &[f64]) -> Vec<f64> {
    full_pivot_solve(&x.gram(), &x.tr_matvec(y))
}

/// Classical Jacobi: rotate away the largest off-diagonal entry each step.
/// Returns eigenvalues sorted descending.
pub fn classical_jacobi_eigenvalues(s: &Matrix) -> Vec<f64> {
    let n = s.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| s.row(i).to_vec()).collect();
    for _ in 0..(50 * n * n).max(1) {
        let (mut p, mut q, mut best) = (0, 0, 0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if a[i][j].abs() > best {
                    best = a[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        let diag: f64 = (0..n).map(|i| a[i][i].abs()).fold(0.0, f64::max);
        if best <= 1e-18 * diag || best == 0.0 {
            break;
        }
        let phi = 0.5 * (2.0 * a[p][q]).atan2(a[q][q] - a[p][p]);
        let (s_, c) = phi.sin_cos();
        for k in 0..n {
            let (akp, akq) = (a[k][p], a[k][q]);
            a[k][p] = c * akp - s_ * akq;
            a[k][q] = s_ * akp + c * akq;
        }
        for k in 0..n {
            let (apk, aqk) = (a[p][k], a[q][k]);
            a[p][k] = c * apk - s_ * aqk;
            a[q][k] = s_ * apk + c * aqk;
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Random full-rank regression instance: n in [6,30], p in [1,5],
/// entries U(-1,1), response with unit-scale noise.
pub struct Instance {
    pub x: Matrix,
    pub y: Vec<f64>,
}

pub fn random_instance(seed: u64) -> Instance {
    let mut s = NormalStream::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = 6 + (s.uniform() * 25.0) as usize;
    let p = 1 + (s.uniform() * 5.0) as usize;
    let x = Matrix::from_fn(n, p, |_, _| 2.0 * s.uniform() - 1.0);
    let y = (0..n).map(|_| 2.0 * s.uniform() - 1.0).collect();
    Instance { x, y }
}

/// Haar-ish random orthogonal matrix from the QR of a Gaussian matrix.
pub fn random_orthogonal(p: usize, seed: u64) -> Matrix {
    let mut s = NormalStream::new(seed);
    let g = Matrix::from_fn(p, p, |_, _| s.next_normal());
    Qr::decompose(&g).unwrap().thin_q()
}

pub fn max_abs_entry_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.sub(b).max_abs()
}
