//! Crate-wide error type. Operations reject bad inputs rather than
//! clamping or coercing them; every variant corresponds to a stated
//! precondition somewhere in the public API.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported series/rank pair: {series}{rank}")]
    UnsupportedSeries { series: char, rank: usize },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight is not dominant: {0}")]
    NonDominant(String),

    #[error("weight is not integral: {0}")]
    NonIntegral(String),

    #[error("operation requires a rational level, got the generic level")]
    GenericLevel,

    #[error("critical level (k + h~ = 0) has no sign class and is not supported")]
    CriticalLevel,

    #[error("levels differ: {0} vs {1}")]
    LevelMismatch(String, String),

    #[error("weights are not in one dotted orbit: representatives {0} vs {1}")]
    NotLinked(String, String),

    #[error("weight is singular (lies on a reflection wall): {0}")]
    SingularWeight(String),

    #[error("anchor difference is not integral: {0}")]
    NonIntegralDifference(String),

    #[error("tilting table is missing a row for {0}")]
    MissingTableRow(String),

    #[error("tilting table is not unitriangular: {0}")]
    NonUnitriangular(String),

    #[error("character vectors have mixed family labels: {0} vs {1}")]
    MixedFamily(String, String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
