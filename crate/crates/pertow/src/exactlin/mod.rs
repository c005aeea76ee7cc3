//! Exact linear algebra over the integers: dense matrices with
//! arbitrary-precision entries, Smith normal form, kernels, and homology of
//! bounded complexes of finitely presented abelian groups.
//!
//! Everything here is deterministic: pivot selection takes the smallest
//! nonzero absolute value, ties broken by lowest (row, col) index, so golden
//! tests see stable transforms.

mod homology;
mod matrix;
mod snf;

pub use homology::{homology_of_complex, BoundedComplex, FinAbPresentation, HomologyGroup};
pub use matrix::IntMatrix;
pub use snf::{kernel_basis, smith_normal_form, solve, SnfDecomposition};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactLinError {
    #[error("differential shapes do not compose at degree {degree}: d_{degree} is {rows}x{cols}, expected {expected_rows} rows")]
    ComplexNotComposable {
        degree: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
    },
    #[error("d∘d ≠ 0 at degree {degree} (column {column} not killed modulo relations)")]
    NotAComplex { degree: usize, column: usize },
    #[error("matrix dimensions mismatch: {0}")]
    Shape(String),
}
