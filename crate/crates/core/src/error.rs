use thiserror::Error;

use crate::f2::F2Matrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("enumeration of {what} needs {requested} bits/elements, cap is {cap}; lower the dimensions or raise the cap")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },
    #[error("generator is not invertible:\n{0}")]
    NotInvertible(F2Matrix),
    #[error("group closure exceeded {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("polynomials live in different rings ({left} vs {right} variables)")]
    VarMismatch { left: usize, right: usize },
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("negative dimension {value} in degree {degree}; the presentation is inconsistent")]
    NegativeDimension { degree: usize, value: i64 },
    #[error("level {level} is outside 1..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("sub-module pieces are not supported here")]
    UnsupportedSubPiece,
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("computed centre has no closed form ({} accepted points)", accepted.len())]
    Inconclusive { accepted: Vec<F2Matrix> },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid presentation:\n{0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
