use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::GroupError;
use crate::codec;
use crate::linalg::{snf, IntMatrix, SnfResult};

/// The abelian group `ℤᵐ / ⟨relation rows⟩`.
///
/// Invariant factors come from a Smith form computed on first use and
/// cached for the lifetime of the value.
#[derive(Debug)]
pub struct PresentedGroup {
    m: usize,
    relations: IntMatrix,
    snf: OnceLock<SnfResult>,
}

/// On-disk form: `{m, relations: [[integer strings]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationFile {
    pub m: usize,
    #[serde(with = "codec::bigint_rows")]
    pub relations: Vec<Vec<BigInt>>,
}

impl Clone for PresentedGroup {
    fn clone(&self) -> Self {
        let snf = OnceLock::new();
        if let Some(s) = self.snf.get() {
            let _ = snf.set(s.clone());
        }
        PresentedGroup { m: self.m, relations: self.relations.clone(), snf }
    }
}

impl PartialEq for PresentedGroup {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.relations == other.relations
    }
}

impl PresentedGroup {
    pub fn new(m: usize, relations: IntMatrix) -> Result<Self, GroupError> {
        if relations.cols() != m {
            return Err(GroupError::Dimension { expected: m, got: relations.cols() });
        }
        Ok(PresentedGroup { m, relations, snf: OnceLock::new() })
    }

    /// `ℤᵐ` with no relations.
    pub fn free(m: usize) -> Self {
        PresentedGroup::new(m, IntMatrix::zeros(0, m)).expect("zero relations")
    }

    pub fn num_generators(&self) -> usize {
        self.m
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn smith(&self) -> &SnfResult {
        self.snf.get_or_init(|| snf(&self.relations))
    }

    /// Nonzero Smith diagonal entries, including the trivial 1s.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.smith().invariant_factors()
    }

    /// Invariant factors greater than 1: the cyclic torsion summands.
    pub fn torsion_coefficients(&self) -> Vec<BigInt> {
        self.invariant_factors().into_iter().filter(|d| !d.is_one()).collect()
    }

    /// Number of `ℤ` summands.
    pub fn torsion_free_rank(&self) -> usize {
        self.m - self.smith().rank
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors().iter().all(One::is_one)
    }

    /// For a finitely generated presentation this coincides with [`Self::is_free`].
    pub fn is_torsion_free(&self) -> bool {
        self.is_free()
    }

    pub fn to_file(&self) -> PresentationFile {
        PresentationFile { m: self.m, relations: self.relations.row_vecs() }
    }

    pub fn from_file(file: PresentationFile) -> Result<Self, GroupError> {
        let rel = IntMatrix::from_rows(file.m, file.relations)?;
        PresentedGroup::new(file.m, rel)
    }
}

/// Free iff every invariant factor is 1.
pub fn is_free(g: &PresentedGroup) -> bool {
    g.is_free()
}

/// `nx = 0 → x = 0 ∨ n = 0`, decided from the invariant factors.
pub fn is_torsion_free(g: &PresentedGroup) -> bool {
    g.is_torsion_free()
}
