use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::is_unit;
use super::{GeneratorSet, GroupError, LatticeGroup, PresentedGroup};
use crate::codec;
use crate::linalg::{hnf, rational_rank, saturation, solve_in_span, IntMatrix, RatVector};

/// `⟨S⟩_* = { y ∈ G : ny ∈ ⟨S⟩ for some n ≠ 0 }`, computed as `ℚ-span(S) ∩ G`.
///
/// In coordinates of `G`'s canonical basis this is the saturation of the
/// integer row lattice spanned by `S`.
pub fn pure_closure(g: &LatticeGroup, s: &GeneratorSet) -> Result<LatticeGroup, GroupError> {
    let k = g.basis_len();
    let mut rows = Vec::with_capacity(s.len());
    for x in s.elements() {
        if x.dim() != g.ambient_dim() {
            return Err(GroupError::Dimension { expected: g.ambient_dim(), got: x.dim() });
        }
        let c = g
            .integer_coordinates(x)
            .ok_or_else(|| GroupError::NotContained { what: "generator set".into(), element: x.clone() })?;
        rows.push(c);
    }
    let coords = IntMatrix::from_rows(k, rows)?;
    let sat = saturation(&coords);
    let basis = (0..sat.rows()).map(|r| g.from_coordinates(sat.row(r))).collect();
    LatticeGroup::new(g.ambient_dim(), basis)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxIndependentResult {
    pub subset: GeneratorSet,
    /// Least `N > 0` with `N·sᵢ ∈ ⟨subset⟩` for every `sᵢ`.
    #[serde(with = "codec::bigint")]
    pub multiplier: BigInt,
}

/// Greedy scan in the given order: `sᵢ` is kept when it is independent of
/// the elements kept so far.
pub fn max_independent_subset(s: &GeneratorSet) -> MaxIndependentResult {
    let dim = s.elements().first().map_or(0, RatVector::dim);
    let (all, _) = s.scaled_rows(dim);
    if rational_rank(&all) == all.rows() {
        return MaxIndependentResult { subset: s.clone(), multiplier: BigInt::one() };
    }
    let mut kept_rows: Vec<usize> = Vec::new();
    for i in 0..all.rows() {
        let trial = all.select_rows(kept_rows.iter().copied().chain([i]));
        if rational_rank(&trial) > kept_rows.len() {
            kept_rows.push(i);
        }
    }
    let subset = GeneratorSet::new(kept_rows.iter().map(|&i| s.elements()[i].clone()));
    let basis = all.select_rows(kept_rows.iter().copied());
    let multiplier = (0..all.rows()).fold(BigInt::one(), |acc, i| {
        let b = RatVector::from_int_slice(all.row(i));
        let sol = solve_in_span(&basis, &b)
            .expect("dimensions agree")
            .expect("every element depends on the kept subset");
        acc.lcm(&sol.least_multiplier)
    });
    MaxIndependentResult { subset, multiplier }
}

/// Torsion-free rank.
pub fn rank0(g: &LatticeGroup) -> usize {
    g.rank0()
}

/// Evidence that `H` is not pure in `G`: `x = n·y` with `x ∈ H`, `y ∈ G \ H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurityWitness {
    pub x: RatVector,
    pub y: RatVector,
    #[serde(with = "codec::bigint")]
    pub n: BigInt,
}

impl PurityWitness {
    /// Re-checks the witness against `H` and `G` directly.
    pub fn verify(&self, h: &LatticeGroup, g: &LatticeGroup) -> bool {
        h.contains(&self.x)
            && g.contains(&self.y)
            && !h.contains(&self.y)
            && !self.n.is_zero()
            && self.y.scale_int(&self.n) == self.x
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurityReport {
    pub pure: bool,
    pub witness: Option<PurityWitness>,
}

/// `H` is pure in `G` iff `H = ℚ-span(H) ∩ G`.
pub fn is_pure(h: &LatticeGroup, g: &LatticeGroup) -> Result<PurityReport, GroupError> {
    h.require_subgroup_of(g, "subgroup")?;
    let closure = pure_closure(g, &GeneratorSet::new(h.basis()))?;
    let Some(y) = closure.basis().into_iter().find(|y| !h.contains(y)) else {
        return Ok(PurityReport { pure: true, witness: None });
    };
    let n = h
        .coordinates(&y)
        .expect("closure lies in the rational span of H")
        .iter()
        .fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
    let x = y.scale_int(&n);
    Ok(PurityReport { pure: false, witness: Some(PurityWitness { x, y, n }) })
}

/// `G/H` as `ℤ^rank(G)` modulo `H`'s basis written in `G`'s canonical basis.
pub fn quotient_presentation(g: &LatticeGroup, h: &LatticeGroup) -> Result<PresentedGroup, GroupError> {
    let rel = h.coordinates_in(g)?;
    PresentedGroup::new(rel.cols(), rel)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complement {
    pub complement: LatticeGroup,
    /// `H`'s basis stacked above `K`'s, in `G`'s canonical coordinates.
    pub change_of_basis: IntMatrix,
    pub determinant: BigInt,
}

/// Finds `K ≤ G` with `H ⊕ K = G`.
///
/// Writes `H`'s basis as the rows of `C` in `G`-coordinates and brings `Cᵀ`
/// to Hermite form, which gives a unimodular `W` with `C·W = [B | 0]`. The
/// trailing rows of `W⁻¹` complete `C` to a basis exactly when `B` is
/// unimodular, i.e. when `H` is pure. The change of basis is checked to
/// have determinant ±1 before returning.
pub fn complement_summand(g: &LatticeGroup, h: &LatticeGroup) -> Result<Complement, GroupError> {
    let purity = is_pure(h, g)?;
    if let Some(w) = purity.witness {
        return Err(GroupError::NotPure(Box::new(w)));
    }
    let c = h.coordinates_in(g)?;
    let (s, k) = (c.rows(), c.cols());
    let ct = hnf(&c.transpose());
    let w = ct.u.transpose();
    // the inverse of a unimodular matrix is the transform of its own Hermite form
    let w_inv = hnf(&w).u;
    debug_assert_eq!(&w * &w_inv, IntMatrix::identity(k));
    let mut tail = w_inv.select_rows(s..k);

    // reduce the complement rows against H's echelon basis
    let hc = hnf(&c);
    for (row, &col) in hc.pivots.iter().enumerate() {
        for r in 0..tail.rows() {
            let q = -tail[(r, col)].div_floor(&hc.h[(row, col)]);
            if !q.is_zero() {
                for j in 0..k {
                    let delta = &q * &hc.h[(row, j)];
                    tail[(r, j)] += delta;
                }
            }
        }
    }
    let tail = hnf(&tail).basis();

    let change = c.stack(&tail)?;
    let det = change.determinant()?;
    if !is_unit(&det) {
        return Err(GroupError::Internal(format!(
            "complement change of basis has determinant {det}"
        )));
    }
    let gens = (0..tail.rows()).map(|r| g.from_coordinates(tail.row(r))).collect();
    let complement = LatticeGroup::new(g.ambient_dim(), gens)?;
    Ok(Complement { complement, change_of_basis: change, determinant: det })
}

/// Re-checks a complement: `H ∩ K = 0`, `H + K = G`, via a unimodular change of basis.
pub fn verify_complement(g: &LatticeGroup, h: &LatticeGroup, k: &LatticeGroup) -> bool {
    let (Ok(ch), Ok(ck)) = (h.coordinates_in(g), k.coordinates_in(g)) else {
        return false;
    };
    let Ok(stacked) = ch.stack(&ck) else { return false };
    stacked.is_square() && stacked.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
}
