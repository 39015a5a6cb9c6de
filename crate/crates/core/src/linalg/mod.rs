//! Exact integer and rational linear algebra.
//!
//! Everything is arbitrary precision; there are no floating-point paths.
//! The row-style Hermite form produced by [`hnf`] is the canonical lattice
//! basis used throughout the crate.

mod hnf;
mod matrix;
mod snf;
mod solve;

pub use hnf::{hermite_basis, hnf, HnfResult};
pub use matrix::{IntMatrix, MatrixFile, RatVector};
pub use snf::{snf, SnfResult};
pub use solve::{rational_rank, saturation, solve_in_span, SpanSolution};

pub(crate) use solve::basis_coordinates;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("{rows}x{cols} matrix needs {} entries, got {got}", rows * cols)]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    RowLength { row: usize, expected: usize, got: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}
