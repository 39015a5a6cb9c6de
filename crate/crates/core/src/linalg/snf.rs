use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U·A·V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// `V⁻¹`, maintained alongside `V`.
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    /// The nonzero diagonal entries `d₁ | d₂ | … | d_r`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Work {
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// `row[dst] += q · row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
    }

    /// `col[dst] += q · col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.d.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        // inverse of the elementary column operation, applied on the left
        self.v_inv.add_row_multiple(src, dst, &-q);
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivots are always the entry of least absolute value available, which
/// keeps intermediate coefficients small.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        d: a.clone(),
        u: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let best = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !w.d[(i, j)].is_zero())
            .min_by_key(|&a| w.d[a].magnitude());
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if !w.d[(i, t)].is_zero() {
                    let q = -(&w.d[(i, t)] / &w.d[(t, t)]);
                    w.add_row(i, t, &q);
                    dirty |= !w.d[(i, t)].is_zero();
                }
            }
            for j in t + 1..n {
                if !w.d[(t, j)].is_zero() {
                    let q = -(&w.d[(t, j)] / &w.d[(t, t)]);
                    w.add_col(j, t, &q);
                    dirty |= !w.d[(t, j)].is_zero();
                }
            }
            if dirty {
                // a remainder smaller than the pivot survived; promote it
                let row_best = (t + 1..m)
                    .filter(|&i| !w.d[(i, t)].is_zero())
                    .min_by_key(|&a| w.d[(a, t)].magnitude());
                let col_best = (t + 1..n)
                    .filter(|&j| !w.d[(t, j)].is_zero())
                    .min_by_key(|&a| w.d[(t, a)].magnitude());
                match (row_best, col_best) {
                    (Some(i), Some(j)) => {
                        if w.d[(i, t)].abs() <= w.d[(t, j)].abs() {
                            w.swap_rows(t, i);
                        } else {
                            w.swap_cols(t, j);
                        }
                    }
                    (Some(i), None) => w.swap_rows(t, i),
                    (None, Some(j)) => w.swap_cols(t, j),
                    (None, None) => unreachable!("dirty implies a nonzero remainder"),
                }
                continue;
            }
            // row and column cleared; enforce divisibility of the remainder block
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !w.d[(i, j)].is_multiple_of(&w.d[(t, t)]))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    w.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if w.d[(t, t)].is_negative() {
            w.d.negate_row(t);
            w.u.negate_row(t);
        }
        t += 1;
    }
    SnfResult { d: w.d, u: w.u, v: w.v, v_inv: w.v_inv, rank: t }
}
