//! Leave-one-out influence diagnostics for linear regression.
//!
//! Given a full-rank design `X` and response `y`, this crate computes for
//! every observation `i` the change `Δβᵢ = β̂ - β̂₍ᵢ₎` in the least-squares
//! estimate caused by deleting it, and several scalar summaries of that
//! change:
//!
//! * the normalized distance `eᵢ²/(σ̂²(1-hᵢᵢ))` obtained by normalizing `Δβᵢ`
//!   with the Moore-Penrose inverse of its own (rank-one) covariance;
//! * Cook's distance `Dᵢ` and its split into per-axis components along the
//!   eigenvectors of `XᵀX`;
//! * the signed statistic `Kᵢ = (eᵢ/(1-hᵢᵢ)) ‖(XᵀX)⁻¹xᵢ‖`, the coordinate of
//!   `Δβᵢ` along the one direction in which it can vary.
//!
//! The [`distribution`] module checks, by explicit matrix arithmetic and by
//! simulation, when `ΔβᵢᵀXᵀXΔβᵢ/σ²` is chi-squared.
//!
//! ```
//! use influence::{data, deletion};
//!
//! let hald = data::builtin("hald")?;
//! let fit = hald.fit()?;
//! let table = deletion::diagnostics_table(&fit)?;
//! assert_eq!(table.argmax_cook(), 8);
//! assert_eq!(table.argmax_abs_k(), 3);
//! assert!((table.row(3).unwrap().k + 76.197).abs() < 1e-3);
//! # Ok::<(), influence::Error>(())
//! ```
//!
//! Observation indices are 1-based throughout the public API.

pub mod data;
pub mod deletion;
pub mod distribution;
pub mod error;
pub mod numerics;
pub mod regression;

pub use data::{builtin, load_csv, ColumnRef, Dataset};
pub use deletion::{
    cook_decomposition, cooks_distance, delta_beta, delta_beta_bruteforce, diagnostics_table,
    k_statistic, k_statistic_transformed, normalized_distance, v_matrix, v_pseudoinverse,
    CookDecomposition, DeletionCase, DiagnosticsRow, DiagnosticsTable,
};
pub use distribution::{
    column_space_check, ks_test_chisq1, lemma1_condition, simulate_quadratic_form,
    ChiSquareCondition, MonteCarloResult,
};
pub use error::{Error, Result};
pub use numerics::{Matrix, SpectralDecomp};
pub use regression::{studentized, RegressionFit, EPS_LEVERAGE};

// The guide under book/ is compiled here so its code listings run as
// doctests with `cargo test`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fitting.md")]
    mod fitting {}
    #[doc = include_str!("../../../book/src/deletion.md")]
    mod deletion {}
    #[doc = include_str!("../../../book/src/cooks_distance.md")]
    mod cooks_distance {}
    #[doc = include_str!("../../../book/src/k_statistic.md")]
    mod k_statistic {}
    #[doc = include_str!("../../../book/src/chi_squared.md")]
    mod chi_squared {}
    #[doc = include_str!("../../../book/src/column_space.md")]
    mod column_space {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    mod datasets {}
}
