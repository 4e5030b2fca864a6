//! Small dense kernels: least squares through Householder QR, the symmetric
//! eigendecomposition, and a general pseudoinverse used as a reference.

mod eigen;
mod matrix;
mod pinv;
mod qr;

pub use eigen::{spectral, SpectralDecomp, MAX_SWEEPS, SYMMETRY_TOL};
pub use matrix::{dot, dot2, norm, Matrix};
pub use pinv::{penrose_violation, pseudoinverse_oracle};
pub use qr::{lstsq_solve, solve_upper, solve_upper_transposed, LeastSquares, Qr, RANK_TOL};
