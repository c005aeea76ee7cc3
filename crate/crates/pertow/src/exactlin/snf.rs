use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Result of a Smith normal form computation: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal, nonnegative, `d[i] | d[i+1]`.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries of `d`, including zeros up to min(rows, cols).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Number of nonzero diagonal entries (the rank over Q).
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

struct Worker {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Worker {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.a.cols() {
            let tmp = self.a[(i, c)].clone();
            self.a[(i, c)] = self.a[(j, c)].clone();
            self.a[(j, c)] = tmp;
        }
        for c in 0..self.u.cols() {
            let tmp = self.u[(i, c)].clone();
            self.u[(i, c)] = self.u[(j, c)].clone();
            self.u[(j, c)] = tmp;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.a.rows() {
            let tmp = self.a[(r, i)].clone();
            self.a[(r, i)] = self.a[(r, j)].clone();
            self.a[(r, j)] = tmp;
        }
        for r in 0..self.v.rows() {
            let tmp = self.v[(r, i)].clone();
            self.v[(r, i)] = self.v[(r, j)].clone();
            self.v[(r, j)] = tmp;
        }
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.a.cols() {
            if self.a[(j, c)].is_zero() {
                continue;
            }
            let add = q * &self.a[(j, c)];
            self.a[(i, c)] += add;
        }
        for c in 0..self.u.cols() {
            if self.u[(j, c)].is_zero() {
                continue;
            }
            let add = q * &self.u[(j, c)];
            self.u[(i, c)] += add;
        }
    }

    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.a.rows() {
            if self.a[(r, j)].is_zero() {
                continue;
            }
            let add = q * &self.a[(r, j)];
            self.a[(r, i)] += add;
        }
        for r in 0..self.v.rows() {
            if self.v[(r, j)].is_zero() {
                continue;
            }
            let add = q * &self.v[(r, j)];
            self.v[(r, i)] += add;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.a.cols() {
            let neg = -self.a[(i, c)].clone();
            self.a[(i, c)] = neg;
        }
        for c in 0..self.u.cols() {
            let neg = -self.u[(i, c)].clone();
            self.u[(i, c)] = neg;
        }
    }

    /// Smallest nonzero |entry| in a[t.., t..], ties by lowest (row, col).
    /// A unit entry is already minimal, so the scan stops there; that is the
    /// common case for monomial matrices and keeps pivoting near-linear.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let e = &self.a[(i, j)];
                if e.is_zero() {
                    continue;
                }
                let a = e.abs();
                if a == BigInt::from(1) {
                    return Some((i, j));
                }
                match &best {
                    Some((cur, _, _)) if *cur <= a => {}
                    _ => best = Some((a, i, j)),
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Replace (a[t][t], a[i][t]) by (gcd, 0) with one unimodular two-row
    /// transform; entries stay polynomially bounded, unlike iterated
    /// remainder promotion.
    fn bezout_rows(&mut self, t: usize, i: usize) {
        let a = self.a[(t, t)].clone();
        let b = self.a[(i, t)].clone();
        if (&b % &a).is_zero() {
            let q = &b / &a;
            self.add_row(i, t, &-q);
            return;
        }
        let ext = a.extended_gcd(&b);
        let (g, x, y) = (ext.gcd, ext.x, ext.y);
        let ag = &a / &g;
        let bg = &b / &g;
        for c in 0..self.a.cols() {
            let rt = self.a[(t, c)].clone();
            let ri = self.a[(i, c)].clone();
            self.a[(t, c)] = &x * &rt + &y * &ri;
            self.a[(i, c)] = &ag * &ri - &bg * &rt;
        }
        for c in 0..self.u.cols() {
            let rt = self.u[(t, c)].clone();
            let ri = self.u[(i, c)].clone();
            self.u[(t, c)] = &x * &rt + &y * &ri;
            self.u[(i, c)] = &ag * &ri - &bg * &rt;
        }
    }

    /// Column analogue of `bezout_rows`.
    fn bezout_cols(&mut self, t: usize, j: usize) {
        let a = self.a[(t, t)].clone();
        let b = self.a[(t, j)].clone();
        if (&b % &a).is_zero() {
            let q = &b / &a;
            self.add_col(j, t, &-q);
            return;
        }
        let ext = a.extended_gcd(&b);
        let (g, x, y) = (ext.gcd, ext.x, ext.y);
        let ag = &a / &g;
        let bg = &b / &g;
        for r in 0..self.a.rows() {
            let ct = self.a[(r, t)].clone();
            let cj = self.a[(r, j)].clone();
            self.a[(r, t)] = &x * &ct + &y * &cj;
            self.a[(r, j)] = &ag * &cj - &bg * &ct;
        }
        for r in 0..self.v.rows() {
            let ct = self.v[(r, t)].clone();
            let cj = self.v[(r, j)].clone();
            self.v[(r, t)] = &x * &ct + &y * &cj;
            self.v[(r, j)] = &ag * &cj - &bg * &ct;
        }
    }
}

/// Smith normal form over Z.
///
/// Returns (d, u, v) with u*m*v = d, |det u| = |det v| = 1, d diagonal with
/// nonnegative entries satisfying the divisibility chain d_i | d_{i+1}.
/// Total on all matrices including empty and zero ones.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let mut w = Worker {
        a: m.clone(),
        u: IntMatrix::identity(m.rows()),
        v: IntMatrix::identity(m.cols()),
    };
    let steps = m.rows().min(m.cols());
    let mut t = 0;
    while t < steps {
        let Some((pi, pj)) = w.pivot(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        // Clear row and column t with Bezout steps. Each pass either leaves
        // the pivot fixed with everything cleared, or replaces it by a
        // proper divisor, so the alternation terminates.
        loop {
            for i in t + 1..w.a.rows() {
                if !w.a[(i, t)].is_zero() {
                    w.bezout_rows(t, i);
                }
            }
            for j in t + 1..w.a.cols() {
                if !w.a[(t, j)].is_zero() {
                    w.bezout_cols(t, j);
                }
            }
            // column clearing may be undone by the row pass
            if (t + 1..w.a.rows()).any(|i| !w.a[(i, t)].is_zero()) {
                continue;
            }
            // enforce that the pivot divides the remaining block, otherwise
            // fold the offending row in and take gcds again
            let mut fixed = true;
            'scan: for i in t + 1..w.a.rows() {
                for j in t + 1..w.a.cols() {
                    if !(&w.a[(i, j)] % &w.a[(t, t)]).is_zero() {
                        w.add_row(t, i, &BigInt::from(1));
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    SnfDecomposition {
        d: w.a,
        u: w.u,
        v: w.v,
    }
}

/// Basis of the integer kernel lattice of `m` (as matrix columns).
///
/// The returned columns span ker(m) and extend to a basis of Z^cols, so any
/// integer kernel vector is an integer combination of them.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let steps = m.rows().min(m.cols());
    let mut cols = Vec::new();
    for j in 0..m.cols() {
        let diag_zero = j >= steps || snf.d[(j, j)].is_zero();
        if diag_zero {
            cols.push(snf.v.column(j));
        }
    }
    let mut out = IntMatrix::zero(m.cols(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        out.set_column(j, col);
    }
    out
}

/// Solve m x = b over the integers, if a solution exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    solve_with(&snf, m.rows(), m.cols(), b)
}

/// Solve against a precomputed decomposition; callers solving many right
/// hand sides against one matrix should reuse the SNF.
pub fn solve_with(
    snf: &SnfDecomposition,
    rows: usize,
    cols: usize,
    b: &[BigInt],
) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), rows);
    let ub = snf.u.mul_vec(b);
    let steps = rows.min(cols);
    let mut y = vec![BigInt::zero(); cols];
    for (i, ubi) in ub.iter().enumerate() {
        if i < steps && !snf.d[(i, i)].is_zero() {
            let (q, r) = ubi.div_rem(&snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check_snf(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "u*m*v != d");
        assert_eq!(snf.u.det().abs(), BigInt::one(), "u not unimodular");
        assert_eq!(snf.v.det().abs(), BigInt::one(), "v not unimodular");
        let diag = snf.diagonal();
        for win in diag.windows(2) {
            if !win[0].is_zero() {
                assert!((&win[1] % &win[0]).is_zero(), "divisibility chain broken");
            } else {
                assert!(win[1].is_zero(), "zero before nonzero on diagonal");
            }
        }
        for d in &diag {
            assert!(!d.is_negative());
        }
    }

    #[test]
    fn diag_2_3_gives_1_6() {
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![BigInt::one(), BigInt::from(6)]);
        check_snf(&m);
    }

    #[test]
    fn zero_matrix() {
        let m = IntMatrix::zero(2, 2);
        let snf = smith_normal_form(&m);
        assert!(snf.d.is_zero());
        assert_eq!(snf.u, IntMatrix::identity(2));
        assert_eq!(snf.v, IntMatrix::identity(2));
    }

    #[test]
    fn identity_is_fixed() {
        let m = IntMatrix::identity(3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, IntMatrix::identity(3));
        check_snf(&m);
    }

    #[test]
    fn empty_shapes() {
        check_snf(&IntMatrix::zero(0, 3));
        check_snf(&IntMatrix::zero(3, 0));
        check_snf(&IntMatrix::zero(0, 0));
    }

    #[test]
    fn kernel_of_projection() {
        // (x, y, z) -> x + y + z
        let m = IntMatrix::from_rows(vec![vec![1, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_works_and_detects_unsolvable() {
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let b = vec![BigInt::from(4), BigInt::from(9)];
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let b2 = vec![BigInt::from(1), BigInt::from(0)];
        assert!(solve(&m, &b2).is_none());
    }
}
