//! Exact arithmetic over the Gaussian rationals and sparse linear algebra on
//! top of it. Nothing in this crate uses floating point.

mod echelon;
mod gaussian;
mod sparse;

use thiserror::Error;

pub use echelon::{kernel_basis, rank, row_reduce, solve, EchelonBasis, RowReduction, DENSE_CUTOFF};
pub use gaussian::{arith, parse_rational, rational_to_string, ArithOp, GaussianRational};
pub use sparse::{SparseMatrix, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
