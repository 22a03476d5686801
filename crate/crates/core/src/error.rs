use thiserror::Error;

use crate::algebra::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector is not in the span of the cycle space")]
    NotInSpan,

    #[error("boundary vector {index} lies outside the span of the cycle space")]
    BoundaryOutsideCycles { index: usize },

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(ValidationReport),

    #[error("cochains belong to different Lie algebras")]
    ParentMismatch,

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: i64 },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("not an ideal: {0}")]
    NotAnIdeal(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown basis element `{0}`")]
    UnknownName(String),

    #[error("defining system prefix is not verified: {0}")]
    NotVerified(String),

    #[error("not a deformation: Maurer-Cartan residual is nonzero for `{0}`")]
    NotADeformation(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("invalid rational `{0}`")]
    BadRational(String),

    #[error("schema violation: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
