//! Exact-arithmetic workbench for monomial perfectoid towers.
//!
//! The library constructs towers of truncated monomial quotient rings at
//! finite p-adic precision, verifies the tower axioms and their cartesian
//! characterizations on finite windows, computes finite-depth tilts with
//! closed-form identifications, and compares tilting-invariant quantities
//! (Koszul homology, Krull dimension, depth, Cohen–Macaulayness via Reisner's
//! criterion) across a tower and its tilt.
//!
//! All computations are exact: integer linear algebra uses arbitrary
//! precision, ring arithmetic is canonical modulo the defining relations, and
//! every verification is a finite check over an explicit window whose
//! parameters travel with the result.

pub mod exactlin;
pub mod koszul;
pub mod levelring;
pub mod simplicial;
pub mod tiltops;
pub mod tower;

pub mod cli;
pub mod fixtures;
pub mod report;

/// Finite verification window: x-degree bound and p-adic precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Window {
    /// Total x-degree bound for enumerated monomials.
    #[serde(rename = "D")]
    pub degree: u32,
    /// Coefficient precision N (arithmetic happens in Z/p^N).
    #[serde(rename = "N")]
    pub precision: u32,
}

impl Window {
    pub fn new(degree: u32, precision: u32) -> Self {
        Window { degree, precision }
    }

    /// The enlarged window used for stability re-checks.
    pub fn enlarged(&self) -> Self {
        Window {
            degree: self.degree + 2,
            precision: self.precision + 1,
        }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window {
            degree: 8,
            precision: 4,
        }
    }
}
