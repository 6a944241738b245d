use thiserror::Error;

use crate::encoding::EncodingMode;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {}x{}", found.0, found.1)]
    DimensionMismatch {
        expected: &'static str,
        found: (usize, usize),
    },

    #[error("moments computed for {found}, expected {expected}")]
    ModeMismatch {
        expected: EncodingMode,
        found: EncodingMode,
    },

    #[error("entry count {found} does not match {rows}x{cols}")]
    EntryCount {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("polar angle {0} outside [0, π]")]
    InvalidPolar(f64),

    #[error("quadrature resolution {found} below minimum {min}")]
    ResolutionTooSmall { found: usize, min: usize },

    #[error("seed is not trace preserving (singlet weight {singlet}, triplet weight {triplet})")]
    UnvalidatedSeed { singlet: f64, triplet: f64 },

    #[error("instrument is not complete (residual {0:e})")]
    NotComplete(f64),

    #[error("{kraus} Kraus operators but {guesses} guesses")]
    GuessCountMismatch { kraus: usize, guesses: usize },

    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("analytic bound is only known for antiparallel encoding")]
    AnalyticUnavailable,

    #[error("need at least {min} points, got {found}")]
    TooFewPoints { found: usize, min: usize },

    #[error("sample count must be positive")]
    NoSamples,
}
