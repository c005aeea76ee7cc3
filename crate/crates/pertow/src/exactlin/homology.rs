use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::snf::{kernel_basis, smith_normal_form, solve};
use super::ExactLinError;

/// A finitely generated abelian group (or Z/p^N-module) presented by
/// generators and integer relations; each column of `relations` is one
/// relation among the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbPresentation {
    pub generators: usize,
    pub relations: IntMatrix,
}

impl FinAbPresentation {
    pub fn new(generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), generators, "relation rows must match generators");
        FinAbPresentation { generators, relations }
    }

    pub fn free(generators: usize) -> Self {
        FinAbPresentation {
            generators,
            relations: IntMatrix::zero(generators, 0),
        }
    }

    /// Cyclic generators with orders `orders[i]`; order 0 means a free Z summand.
    pub fn with_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let cols: Vec<usize> = (0..n).filter(|&i| !orders[i].is_zero()).collect();
        let mut rel = IntMatrix::zero(n, cols.len());
        for (j, &i) in cols.iter().enumerate() {
            rel[(i, j)] = orders[i].clone();
        }
        FinAbPresentation {
            generators: n,
            relations: rel,
        }
    }

    /// Impose `scalar * g = 0` for every generator (the Z/p^N coefficient
    /// trick: append scalar*identity to the relation matrix).
    pub fn quotient_by(&self, scalar: &BigInt) -> Self {
        let mut extra = IntMatrix::zero(self.generators, self.generators);
        for i in 0..self.generators {
            extra[(i, i)] = scalar.clone();
        }
        FinAbPresentation {
            generators: self.generators,
            relations: self.relations.hstack(&extra),
        }
    }

    /// Canonical invariant-factor form of the presented group.
    pub fn invariants(&self) -> HomologyGroup {
        let snf = smith_normal_form(&self.relations);
        let diag = snf.diagonal();
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion: Vec<BigInt> = diag
            .into_iter()
            .filter(|d| !d.is_zero() && *d != BigInt::one())
            .collect();
        HomologyGroup {
            free_rank: self.generators - rank,
            torsion,
        }
    }

    /// Does `v` lie in the relation subgroup?
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        solve(&self.relations, v).is_some()
    }

    /// A reusable membership tester for the relation subgroup; relation
    /// matrices with at most one nonzero entry per column (the common
    /// cyclic-order shape) get a per-row divisibility test, everything else
    /// a Smith normal form computed once.
    pub fn relation_solver(&self) -> RelationSolver {
        if let Some(divisors) = diagonal_divisors(&self.relations) {
            return RelationSolver::Diagonal(divisors);
        }
        RelationSolver::General {
            snf: smith_normal_form(&self.relations),
            rows: self.relations.rows(),
            cols: self.relations.cols(),
        }
    }
}

fn diagonal_divisors(rel: &IntMatrix) -> Option<Vec<BigInt>> {
    let mut div = vec![BigInt::zero(); rel.rows()];
    for c in 0..rel.cols() {
        let mut seen: Option<usize> = None;
        for r in 0..rel.rows() {
            if !rel[(r, c)].is_zero() {
                if seen.is_some() {
                    return None;
                }
                seen = Some(r);
            }
        }
        if let Some(r) = seen {
            div[r] = num_integer::Integer::gcd(&div[r], &rel[(r, c)]);
        }
    }
    Some(div)
}

/// Cached relation-membership tester.
pub enum RelationSolver {
    Diagonal(Vec<BigInt>),
    General {
        snf: super::snf::SnfDecomposition,
        rows: usize,
        cols: usize,
    },
}

impl RelationSolver {
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        match self {
            RelationSolver::Diagonal(div) => v.iter().zip(div).all(|(x, d)| {
                if d.is_zero() {
                    x.is_zero()
                } else {
                    (x % d).is_zero()
                }
            }),
            RelationSolver::General { snf, rows, cols } => {
                super::snf::solve_with(snf, *rows, *cols, v).is_some()
            }
        }
    }
}

/// Invariant-factor data of a finitely generated abelian group: free rank
/// plus torsion factors d_1 | d_2 | ... (each > 1, ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl serde::Serialize for HomologyGroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("HomologyGroup", 2)?;
        s.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(|t| t.to_string()).collect();
        s.serialize_field("torsion", &torsion)?;
        s.end()
    }
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum, renormalizing the factors into a divisibility chain.
    pub fn direct_sum(&self, other: &HomologyGroup) -> HomologyGroup {
        let mut orders: Vec<BigInt> = Vec::new();
        orders.extend(self.torsion.iter().cloned());
        orders.extend(other.torsion.iter().cloned());
        orders.extend(std::iter::repeat(BigInt::zero()).take(self.free_rank + other.free_rank));
        FinAbPresentation::with_orders(&orders).invariants()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A bounded chain complex of finitely presented abelian groups.
///
/// `modules[q]` is C_q and `differentials[q]` is d_{q+1}: C_{q+1} -> C_q,
/// given on generators; the maps must respect the relations.
#[derive(Clone, Debug)]
pub struct BoundedComplex {
    pub modules: Vec<FinAbPresentation>,
    pub differentials: Vec<IntMatrix>,
}

impl BoundedComplex {
    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn validate(&self) -> Result<(), ExactLinError> {
        if self.modules.is_empty() {
            return Ok(());
        }
        assert_eq!(
            self.differentials.len() + 1,
            self.modules.len(),
            "need one differential per adjacent pair"
        );
        let solvers: Vec<_> = self.modules.iter().map(|m| m.relation_solver()).collect();
        for (q, d) in self.differentials.iter().enumerate() {
            if d.rows() != self.modules[q].generators || d.cols() != self.modules[q + 1].generators {
                return Err(ExactLinError::ComplexNotComposable {
                    degree: q + 1,
                    rows: d.rows(),
                    cols: d.cols(),
                    expected_rows: self.modules[q].generators,
                });
            }
            // the map must kill relations of the source in the target group
            let mapped = d.mul(&self.modules[q + 1].relations);
            for col in 0..mapped.cols() {
                if !solvers[q].is_zero_element(&mapped.column(col)) {
                    return Err(ExactLinError::NotAComplex {
                        degree: q + 1,
                        column: col,
                    });
                }
            }
        }
        for q in 0..self.differentials.len().saturating_sub(1) {
            let dd = self.differentials[q].mul(&self.differentials[q + 1]);
            for col in 0..dd.cols() {
                if !solvers[q].is_zero_element(&dd.column(col)) {
                    return Err(ExactLinError::NotAComplex {
                        degree: q + 2,
                        column: col,
                    });
                }
            }
        }
        Ok(())
    }

    /// Homology H_q = ker(d_q)/im(d_{q+1}) for every degree, as canonical
    /// invariant factors. The computation works with the quotient groups, so
    /// module relations participate on both the cycle and boundary side.
    pub fn homology(&self) -> Result<Vec<HomologyGroup>, ExactLinError> {
        self.validate()?;
        let n = self.modules.len();
        let mut out = Vec::with_capacity(n);
        for q in 0..n {
            let nq = self.modules[q].generators;
            // cycles: vectors whose image under d_q dies in C_{q-1}
            let cycles = if q == 0 {
                IntMatrix::identity(nq)
            } else {
                let down = &self.differentials[q - 1];
                let stacked = down.hstack(&self.modules[q - 1].relations);
                let full = kernel_basis(&stacked);
                IntMatrix::from_fn(nq, full.cols(), |i, j| full[(i, j)].clone())
            };
            // boundaries plus relations of C_q
            let bounds = if q + 1 < n {
                self.differentials[q].hstack(&self.modules[q].relations)
            } else {
                self.modules[q].relations.clone()
            };
            out.push(subquotient(&cycles, &bounds));
        }
        Ok(out)
    }
}

/// Invariants of span(z_cols) / span(b_cols) inside Z^n, assuming the
/// boundary span is contained in the cycle span.
fn subquotient(cycles: &IntMatrix, bounds: &IntMatrix) -> HomologyGroup {
    let z = cycles.cols();
    if z == 0 {
        return HomologyGroup::zero();
    }
    let stacked = cycles.hstack(bounds);
    let full = kernel_basis(&stacked);
    let relations = IntMatrix::from_fn(z, full.cols(), |i, j| full[(i, j)].clone());
    FinAbPresentation::new(z, relations).invariants()
}

/// Convenience wrapper matching the library's operation vocabulary.
pub fn homology_of_complex(complex: &BoundedComplex) -> Result<Vec<HomologyGroup>, ExactLinError> {
    complex.homology()
}
