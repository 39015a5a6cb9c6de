use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Row-style Hermite normal form of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    /// Echelon form with positive pivots; entries above a pivot lie in `[0, pivot)`.
    /// Zero rows come last.
    pub h: IntMatrix,
    /// Unimodular with `u · a = h`.
    pub u: IntMatrix,
    /// Column of each pivot, one per nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl HnfResult {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `h`: the canonical basis of the row lattice.
    pub fn basis(&self) -> IntMatrix {
        self.h.select_rows(0..self.rank())
    }

    /// Rows of `u` that map to zero rows of `h`: a basis of the integer left
    /// kernel `{x : x · a = 0}`.
    pub fn left_kernel(&self) -> IntMatrix {
        self.u.select_rows(self.rank()..self.u.rows())
    }
}

/// Computes `(H, U)` with `U·A = H` in row Hermite normal form.
pub fn hnf(a: &IntMatrix) -> HnfResult {
    let mut u = IntMatrix::identity(a.rows());
    let (h, pivots) = reduce(a, Some(&mut u));
    HnfResult { h, u, pivots }
}

/// The nonzero rows of the Hermite form and their pivot columns, without
/// the transform.
pub fn hermite_basis(a: &IntMatrix) -> (IntMatrix, Vec<usize>) {
    let (h, pivots) = reduce(a, None);
    (h.select_rows(0..pivots.len()), pivots)
}

fn reduce(a: &IntMatrix, mut u: Option<&mut IntMatrix>) -> (IntMatrix, Vec<usize>) {
    let (m, n) = (a.rows(), a.cols());
    if let Some(pivots) = hermite_pivots(a) {
        return (a.clone(), pivots);
    }
    let mut h = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;

    for c in 0..n {
        if r == m {
            break;
        }
        let mut found = false;
        loop {
            // smallest nonzero entry at or below row r
            let pick = (r..m)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by_key(|&i| h[(i, c)].magnitude());
            let Some(p) = pick else { break };
            found = true;
            h.swap_rows(r, p);
            if let Some(u) = u.as_deref_mut() {
                u.swap_rows(r, p);
            }
            let mut clean = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, c)] / &h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                if let Some(u) = u.as_deref_mut() {
                    u.add_row_multiple(i, r, &q);
                }
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            if let Some(u) = u.as_deref_mut() {
                u.negate_row(r);
            }
        }
        for i in 0..r {
            let q: BigInt = -h[(i, c)].div_floor(&h[(r, c)]);
            if q.is_zero() {
                continue;
            }
            h.add_row_multiple(i, r, &q);
            if let Some(u) = u.as_deref_mut() {
                u.add_row_multiple(i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (h, pivots)
}

/// Pivot columns of `a` when it is already in Hermite form.
fn hermite_pivots(a: &IntMatrix) -> Option<Vec<usize>> {
    let mut pivots: Vec<usize> = Vec::new();
    for r in 0..a.rows() {
        let Some(c) = (0..a.cols()).find(|&c| !a[(r, c)].is_zero()) else {
            // zero rows must all come last
            return (r..a.rows()).all(|i| (0..a.cols()).all(|c| a[(i, c)].is_zero())).then_some(pivots);
        };
        if pivots.last().is_some_and(|&p| p >= c) || !a[(r, c)].is_positive() {
            return None;
        }
        let p = &a[(r, c)];
        if (0..r).any(|i| a[(i, c)].is_negative() || &a[(i, c)] >= p) {
            return None;
        }
        pivots.push(c);
    }
    Some(pivots)
}
