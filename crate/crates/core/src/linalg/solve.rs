use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{hermite_basis, hnf, snf, IntMatrix, LinalgError, RatVector};

/// Rank over ℚ, by fraction-free elimination with each row kept primitive.
pub fn rational_rank(a: &IntMatrix) -> usize {
    let mut rows: Vec<Vec<BigInt>> = a.row_vecs();
    let mut rank = 0;
    for c in 0..a.cols() {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            let mut g = BigInt::zero();
            for (x, y) in row.iter_mut().zip(pivot_row) {
                *x *= &pivot_row[c];
                if !y.is_zero() {
                    *x -= &f * y;
                }
                if !g.is_one() {
                    g = g.gcd(x);
                }
            }
            if g > BigInt::one() {
                row.iter_mut().for_each(|x| *x /= &g);
            }
        }
        rank += 1;
    }
    rank
}

/// A representation of `b` in the row span of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanSolution {
    /// `c` with `c · A = b`, one entry per row of `A`.
    pub coefficients: Vec<BigRational>,
    /// Least `n > 0` with `n·b` in the integer row lattice of `A`.
    pub least_multiplier: BigInt,
}

/// Solves `c · A = b` over ℚ.
///
/// Works through the Hermite form `H = U·A`: `b` is written in the
/// canonical lattice basis (the nonzero rows of `H`), and the least integer
/// multiplier is the lcm of the denominators of those coordinates.
pub fn solve_in_span(a: &IntMatrix, b: &RatVector) -> Result<Option<SpanSolution>, LinalgError> {
    if b.dim() != a.cols() {
        return Err(LinalgError::Shape(format!(
            "vector of dimension {} against a matrix with {} columns",
            b.dim(),
            a.cols()
        )));
    }
    let h = hnf(a);
    let Some(coords) = basis_coordinates(&h.h, &h.pivots, b) else {
        return Ok(None);
    };
    let least_multiplier = coords.iter().fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
    let coefficients = (0..a.rows())
        .map(|j| {
            coords
                .iter()
                .enumerate()
                .fold(BigRational::zero(), |acc, (i, t)| acc + t * BigRational::from_integer(h.u[(i, j)].clone()))
        })
        .collect();
    Ok(Some(SpanSolution { coefficients, least_multiplier }))
}

/// Coordinates of `b` in the echelon rows `h[0..pivots.len()]`, if `b` lies
/// in their ℚ-span.
pub(crate) fn basis_coordinates(h: &IntMatrix, pivots: &[usize], b: &RatVector) -> Option<Vec<BigRational>> {
    let mut rest: Vec<BigRational> = b.entries().to_vec();
    let mut coords = Vec::with_capacity(pivots.len());
    for (i, &c) in pivots.iter().enumerate() {
        let t = &rest[c] / BigRational::from_integer(h[(i, c)].clone());
        if !t.is_zero() {
            for (j, x) in rest.iter_mut().enumerate() {
                let hij = &h[(i, j)];
                if !hij.is_zero() {
                    *x -= &t * BigRational::from_integer(hij.clone());
                }
            }
        }
        coords.push(t);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

/// A basis of `ℚ-span(rows A) ∩ ℤⁿ`, in Hermite form.
///
/// With `U·A·V = D`, the row lattice of `A` is spanned by `dᵢ·(V⁻¹)ᵢ`, so
/// the first `rank` rows of `V⁻¹` span its saturation.
pub fn saturation(a: &IntMatrix) -> IntMatrix {
    match rational_rank(a) {
        0 => return IntMatrix::zeros(0, a.cols()),
        r if r == a.cols() => return IntMatrix::identity(r),
        _ => {}
    }
    let s = snf(a);
    let rows = s.v_inv.select_rows(0..s.rank);
    hermite_basis(&rows).0
}
