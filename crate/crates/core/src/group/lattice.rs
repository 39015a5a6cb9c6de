use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{GroupError, PresentedGroup};
use crate::linalg::{basis_coordinates, hermite_basis, hnf, rational_rank, IntMatrix, RatVector};

/// A finitely generated subgroup of `ℚⁿ`.
///
/// The canonical basis is the Hermite form of the generators after clearing
/// denominators, scaled back down. Two `LatticeGroup`s compare equal when
/// they are the same subgroup.
#[derive(Clone, Debug)]
pub struct LatticeGroup {
    ambient_dim: usize,
    generators: Vec<RatVector>,
    /// common denominator of the generators
    scale: BigInt,
    /// Hermite basis of `scale · generators`
    int_basis: IntMatrix,
    pivots: Vec<usize>,
}

/// On-disk form: `{ambient_dim, generators: [[rational strings]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub ambient_dim: usize,
    pub generators: Vec<RatVector>,
}

impl LatticeGroup {
    pub fn new(ambient_dim: usize, generators: Vec<RatVector>) -> Result<Self, GroupError> {
        if let Some(g) = generators.iter().find(|g| g.dim() != ambient_dim) {
            return Err(GroupError::Dimension { expected: ambient_dim, got: g.dim() });
        }
        let scale = generators
            .iter()
            .map(RatVector::denominator_lcm)
            .filter(|d| !d.is_one())
            .fold(BigInt::one(), |acc, d| num_integer::Integer::lcm(&acc, &d));
        let rows = generators
            .iter()
            .map(|g| g.to_integers_scaled(&scale).expect("scale clears every denominator"))
            .collect();
        let scaled = IntMatrix::from_rows(ambient_dim, rows).expect("dimensions checked");
        let (int_basis, pivots) = hermite_basis(&scaled);
        Ok(LatticeGroup { ambient_dim, generators, scale, int_basis, pivots })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self, GroupError> {
        let dim = rows.first().map_or(0, |r| r.len());
        LatticeGroup::new(dim, rows.iter().map(|r| RatVector::from_ints(r.iter().copied())).collect())
    }

    /// `ℤⁿ` with the standard basis.
    pub fn standard(dim: usize) -> Self {
        let gens = (0..dim)
            .map(|i| RatVector::from_ints((0..dim).map(|j| i64::from(i == j))))
            .collect();
        LatticeGroup::new(dim, gens).expect("standard basis has the right dimension")
    }

    pub fn trivial(dim: usize) -> Self {
        LatticeGroup::new(dim, Vec::new()).expect("no generators")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[RatVector] {
        &self.generators
    }

    /// Canonical basis; its size is the rank.
    pub fn basis(&self) -> Vec<RatVector> {
        let inv = BigRational::new(BigInt::one(), self.scale.clone());
        (0..self.int_basis.rows())
            .map(|r| RatVector::from_int_slice(self.int_basis.row(r)).scale(&inv))
            .collect()
    }

    /// The same subgroup, generated by its canonical basis.
    pub fn canonical(&self) -> LatticeGroup {
        LatticeGroup::new(self.ambient_dim, self.basis()).expect("basis has ambient dimension")
    }

    /// Torsion-free rank: the rational rank of the generator matrix.
    pub fn rank0(&self) -> usize {
        rational_rank(&self.scaled_generators())
    }

    /// Size of the canonical basis.
    pub fn basis_len(&self) -> usize {
        self.int_basis.rows()
    }

    pub fn is_trivial(&self) -> bool {
        self.int_basis.rows() == 0
    }

    /// Generators multiplied by the common denominator, as integer rows.
    pub fn scaled_generators(&self) -> IntMatrix {
        let rows = self
            .generators
            .iter()
            .map(|g| g.to_integers_scaled(&self.scale).expect("scale clears every denominator"))
            .collect();
        IntMatrix::from_rows(self.ambient_dim, rows).expect("dimensions checked")
    }

    /// Coordinates of `x` in the canonical basis, if `x` is in the ℚ-span.
    pub fn coordinates(&self, x: &RatVector) -> Option<Vec<BigRational>> {
        if x.dim() != self.ambient_dim {
            return None;
        }
        let scaled = x.scale_int(&self.scale);
        basis_coordinates(&self.int_basis, &self.pivots, &scaled)
    }

    /// Integer coordinates of `x` in the canonical basis when `x ∈ self`.
    pub fn integer_coordinates(&self, x: &RatVector) -> Option<Vec<BigInt>> {
        if x.dim() != self.ambient_dim {
            return None;
        }
        let mut rest = x.to_integers_scaled(&self.scale)?;
        let mut coords = Vec::with_capacity(self.pivots.len());
        for (i, &c) in self.pivots.iter().enumerate() {
            let row = self.int_basis.row(i);
            let (t, r) = num_integer::Integer::div_rem(&rest[c], &row[c]);
            if !r.is_zero() {
                return None;
            }
            if !t.is_zero() {
                for (x, h) in rest.iter_mut().zip(row) {
                    if !h.is_zero() {
                        *x -= &t * h;
                    }
                }
            }
            coords.push(t);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, x: &RatVector) -> bool {
        self.integer_coordinates(x).is_some()
    }

    pub fn in_rational_span(&self, x: &RatVector) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn contains_group(&self, other: &LatticeGroup) -> bool {
        other.ambient_dim == self.ambient_dim && other.generators.iter().all(|g| self.contains(g))
    }

    pub(crate) fn require_subgroup_of(&self, other: &LatticeGroup, what: &str) -> Result<(), GroupError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(GroupError::Dimension { expected: other.ambient_dim, got: self.ambient_dim });
        }
        match self.generators.iter().find(|g| !other.contains(g)) {
            None => Ok(()),
            Some(g) => Err(GroupError::NotContained { what: what.to_owned(), element: g.clone() }),
        }
    }

    /// Canonical basis of `self` written in the canonical basis of `outer`.
    pub fn coordinates_in(&self, outer: &LatticeGroup) -> Result<IntMatrix, GroupError> {
        self.require_subgroup_of(outer, "subgroup")?;
        let rows = self
            .basis()
            .iter()
            .map(|b| outer.integer_coordinates(b).expect("containment checked"))
            .collect();
        Ok(IntMatrix::from_rows(outer.int_basis.rows(), rows).expect("coordinates have rank length"))
    }

    /// Vector with coordinates `coords` in the canonical basis.
    pub fn from_coordinates(&self, coords: &[BigInt]) -> RatVector {
        let mut acc = vec![BigInt::zero(); self.ambient_dim];
        for (c, r) in coords.iter().zip(0..self.int_basis.rows()) {
            if c.is_zero() {
                continue;
            }
            for (a, h) in acc.iter_mut().zip(self.int_basis.row(r)) {
                if !h.is_zero() {
                    *a += c * h;
                }
            }
        }
        if self.scale.is_one() {
            return RatVector::new(acc.into_iter().map(BigRational::from_integer).collect());
        }
        RatVector::new(acc.into_iter().map(|a| BigRational::new(a, self.scale.clone())).collect())
    }

    /// `[outer : self]` for `self ⊆ outer` of equal rank.
    pub fn index_in(&self, outer: &LatticeGroup) -> Result<Option<BigInt>, GroupError> {
        let c = self.coordinates_in(outer)?;
        if !c.is_square() {
            return Ok(None);
        }
        Ok(Some(num_traits::Signed::abs(&c.determinant().expect("square"))))
    }

    /// `ℤ^(#generators)` modulo the integer relations among the generators.
    /// Always free; computing it is a check on that fact.
    pub fn presentation(&self) -> PresentedGroup {
        let h = hnf(&self.scaled_generators());
        PresentedGroup::new(self.generators.len(), h.left_kernel()).expect("kernel rows have generator length")
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile { ambient_dim: self.ambient_dim, generators: self.generators.clone() }
    }

    pub fn from_file(file: GroupFile) -> Result<Self, GroupError> {
        LatticeGroup::new(file.ambient_dim, file.generators)
    }

    /// The canonical basis as a [`GroupFile`].
    pub fn to_canonical_file(&self) -> GroupFile {
        GroupFile { ambient_dim: self.ambient_dim, generators: self.basis() }
    }
}

impl PartialEq for LatticeGroup {
    fn eq(&self, other: &Self) -> bool {
        // the common denominator is determined by the subgroup, so the scaled
        // Hermite bases agree exactly when the subgroups do
        self.ambient_dim == other.ambient_dim && self.scale == other.scale && self.int_basis == other.int_basis
    }
}

impl Eq for LatticeGroup {}

/// A finite list of group elements with duplicates removed (first
/// occurrence kept).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "SetFile", into = "Vec<RatVector>")]
pub struct GeneratorSet {
    elements: Vec<RatVector>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SetFile {
    List(Vec<RatVector>),
    Object { elements: Vec<RatVector> },
}

impl From<SetFile> for GeneratorSet {
    fn from(f: SetFile) -> Self {
        match f {
            SetFile::List(v) | SetFile::Object { elements: v } => GeneratorSet::new(v),
        }
    }
}

impl From<GeneratorSet> for Vec<RatVector> {
    fn from(s: GeneratorSet) -> Self {
        s.elements
    }
}

impl GeneratorSet {
    pub fn new(elements: impl IntoIterator<Item = RatVector>) -> Self {
        let mut out: Vec<RatVector> = Vec::new();
        for e in elements {
            if !out.contains(&e) {
                out.push(e);
            }
        }
        GeneratorSet { elements: out }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        GeneratorSet::new(rows.iter().map(|r| RatVector::from_ints(r.iter().copied())))
    }

    pub fn elements(&self) -> &[RatVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Integer rows `d · S` and the common denominator `d`.
    pub fn scaled_rows(&self, dim: usize) -> (IntMatrix, BigInt) {
        let d = self
            .elements
            .iter()
            .map(RatVector::denominator_lcm)
            .filter(|d| !d.is_one())
            .fold(BigInt::one(), |acc, d| num_integer::Integer::lcm(&acc, &d));
        let rows = self
            .elements
            .iter()
            .map(|e| e.to_integers_scaled(&d).expect("d clears denominators"))
            .collect();
        (IntMatrix::from_rows(dim, rows).expect("elements share a dimension"), d)
    }
}

/// `n · x` by the recursion `0x = 0`, `nx = (n-1)x + x`, with negative `n`
/// handled as the additive inverse of `(-n)x`. Linear in `|n|`.
pub fn scalar_multiple(n: i64, x: &RatVector) -> RatVector {
    if n < 0 {
        return scalar_multiple_nonneg(n.unsigned_abs(), x).neg();
    }
    scalar_multiple_nonneg(n as u64, x)
}

fn scalar_multiple_nonneg(n: u64, x: &RatVector) -> RatVector {
    let mut acc = RatVector::zero(x.dim());
    for _ in 0..n {
        acc = acc.add(x);
    }
    acc
}

pub(crate) fn is_unit(d: &BigInt) -> bool {
    d.is_one() || (-d).is_one()
}

pub(crate) fn nonzero(v: &RatVector) -> bool {
    v.entries().iter().any(|x| !x.is_zero())
}
