use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("anchors are linearly dependent (gram determinant {gamma:e} <= {threshold:e})")]
    DegenerateAnchors { gamma: f64, threshold: f64 },

    #[error("negative radicand {radicand:e} exceeds tolerance {tolerance:e}")]
    NumericalInstability { radicand: f64, tolerance: f64 },

    #[error("frame operator is singular (lower bound {lower:e}, upper bound {upper:e})")]
    SingularFrameOperator { lower: f64, upper: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("generation failed after {attempts} attempts: {what}")]
    Generation { what: String, attempts: usize },

    #[error("invalid input: {0}")]
    Input(String),
}
