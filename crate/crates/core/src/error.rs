use thiserror::Error;

use crate::pairs::Family;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters for {family} (p = {p}, q = {q}): {reason}")]
    ConstraintViolation {
        family: Family,
        p: usize,
        q: usize,
        reason: String,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("element is not in {0}")]
    NotInSpace(&'static str),
    #[error("no rational sl2-triple through e: {0}")]
    NoTriple(String),
    #[error("slice dimension {found} does not match rank of theta {expected}")]
    SliceDimension { expected: usize, found: usize },
    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),
    #[error("gave up after {0} singular draws")]
    RetryExhausted(usize),
    #[error("the general linear family needs both off-diagonal blocks")]
    NeedsBothBlocks,
    #[error("no exactly verified slice point found (this does not prove the fiber is empty)")]
    NotFound,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
