use thiserror::Error;

use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("degree overflow: {0} + {1} exceeds {2} generators")]
    DegreeOverflow(usize, usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("d(dx{generator}) != 0: coefficient of x{}x{}x{} is nonzero", triple.0, triple.1, triple.2)]
    NotClosed {
        generator: usize,
        triple: (usize, usize, usize),
    },
    #[error("not nilpotent: filtration stabilizes at dimension {reached} of {n}")]
    NotNilpotent { reached: usize, n: usize },
    #[error("dimension {0} is outside the supported range")]
    BadDimension(usize),
    #[error("unreachable signature {0:?}")]
    UnreachableSignature(Vec<usize>),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("parameter not allowed: {0}")]
    ParameterNotAllowed(String),
    #[error("pencil generators are linearly dependent")]
    DependentPencil,
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),
    #[error("internal classifier failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
