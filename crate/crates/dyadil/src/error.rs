//! Error types shared across the crate.

use thiserror::Error;

/// Errors from parsing word literals `PREFIX(PERIOD)`.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseWordError {
    #[error("letter {0:?} is not 0 or 1")]
    BadLetter(char),
    #[error("word literal must end with a parenthesized period, e.g. 01(10)")]
    MissingPeriod,
    #[error("period must be non-empty")]
    EmptyPeriod,
}

/// Errors from parsing rational literals like `1/-3`.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("invalid integer: {0}")]
    BadInteger(String),
    #[error("denominator must be odd and nonzero, got {0}")]
    BadDenominator(String),
}

/// Errors raised when evaluating a dilatation structure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DilError {
    /// An inverse-scale map was applied outside its cylinder domain.
    #[error("point {point} lies outside the domain cylinder [{base}]_{depth}")]
    OutsideDomain {
        base: String,
        point: String,
        depth: u32,
    },
    /// A table-backed isometry was queried beyond its depth.
    #[error("isometry table of depth {depth} queried at depth {wanted}")]
    TableDepthExceeded { depth: u32, wanted: u32 },
    /// The scale element is not admissible (e.g. ε = 0 for a valued field).
    #[error("inadmissible scale: {0}")]
    BadScale(String),
    /// Tangent iteration failed to settle by the given horizon.
    #[error("no stabilization by stage {max_p}: {reason}")]
    NoStabilization { max_p: u32, reason: String },
    /// An extracted map failed the isometry or letter checks of the W codec.
    #[error("W extraction failed: {0}")]
    WExtraction(String),
    /// Preconditions of a verification routine are not met.
    #[error("precondition failed: {0}")]
    Precondition(String),
}
