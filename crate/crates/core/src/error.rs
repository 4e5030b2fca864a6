//! Error type shared by every module of the crate.
//!
//! Observation indices carried inside errors are 1-based, the same
//! convention used by the public API.

use std::path::PathBuf;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("design matrix is rank deficient: numerical rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("design matrix becomes rank deficient after deleting observation {index}")]
    RankDeficientAfterDeletion { index: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    #[error("no residual degrees of freedom: n = {n}, p = {p} (need n > p)")]
    DegenerateResidual { n: usize, p: usize },

    #[error("residual variance estimate is zero; scaled diagnostics are undefined")]
    ZeroVariance,

    #[error("observation {index} has leverage {leverage} at or above 1 - 1e-8; deletion formulas are singular")]
    LeverageOne { index: usize, leverage: f64 },

    #[error("observation index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("transformation matrix is singular")]
    SingularTransform,

    #[error("leverage must lie in (0,1), got {0}")]
    InvalidLeverage(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("too few samples for the KS test: {got} < {min}")]
    TooFewSamples { got: usize, min: usize },

    #[error("closed-form identity check failed: {what} (relative error {error:e})")]
    IdentityCheck { what: &'static str, error: f64 },

    #[error("unknown dataset '{0}' (available: hald, bodyfat, rat)")]
    UnknownDataset(String),

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("column '{0}' is not numeric")]
    NonNumericColumn(String),

    #[error("no data: {0}")]
    EmptyData(String),

    #[error("checksum mismatch for bundled dataset '{0}'")]
    ChecksumMismatch(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("observation {index}: {source}")]
    AtObservation {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors that come from the numerics rather than from the
    /// input data or arguments.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::RankDeficient { .. }
            | Error::RankDeficientAfterDeletion { .. }
            | Error::NotSymmetric { .. }
            | Error::NonConvergence { .. }
            | Error::DegenerateResidual { .. }
            | Error::ZeroVariance
            | Error::LeverageOne { .. }
            | Error::SingularTransform
            | Error::IdentityCheck { .. } => true,
            Error::AtObservation { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    /// Index of the observation the error refers to, if any.
    pub fn observation(&self) -> Option<usize> {
        match self {
            Error::AtObservation { index, .. }
            | Error::LeverageOne { index, .. }
            | Error::RankDeficientAfterDeletion { index }
            | Error::IndexOutOfRange { index, .. } => Some(*index),
            _ => None,
        }
    }

    pub(crate) fn at(self, index: usize) -> Error {
        match self {
            e @ (Error::AtObservation { .. }
            | Error::LeverageOne { .. }
            | Error::RankDeficientAfterDeletion { .. }
            | Error::IndexOutOfRange { .. }) => e,
            e => Error::AtObservation {
                index,
                source: Box::new(e),
            },
        }
    }
}
