use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{GroupError, LatticeGroup};
use crate::linalg::RatVector;

/// Built-in countable groups given as increasing unions `G₁ ⊆ G₂ ⊆ …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `G_k = ℤᵏ` inside `ℤ^(ω)`.
    FreeOmega,
    /// `G_k = ⟨1/k!⟩ ⊆ ℚ`; the union is `ℚ`.
    RationalsFactorial,
    /// `G_k = ⟨1/2ᵏ⟩ ⊆ ℚ`; the union is `ℤ[1/2]`.
    DyadicRationals,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::FreeOmega, Family::RationalsFactorial, Family::DyadicRationals];

    pub fn name(self) -> &'static str {
        match self {
            Family::FreeOmega => "free-omega",
            Family::RationalsFactorial => "rationals-factorial",
            Family::DyadicRationals => "dyadic-rationals",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GroupError::UnknownFamily(s.to_owned()))
    }
}

/// `p`-height of an element in the full group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Height {
    Finite(u64),
    Infinite,
}

#[derive(Clone, Debug)]
enum Source {
    Family(Family),
    /// Explicit levels `G₁, G₂, …`.
    Explicit(Vec<LatticeGroup>),
}

/// A countable group approximated level by level.
#[derive(Clone, Debug)]
pub struct LevelledGroup {
    name: String,
    source: Source,
}

impl LevelledGroup {
    pub fn family(f: Family) -> Self {
        LevelledGroup { name: f.name().to_owned(), source: Source::Family(f) }
    }

    /// A chain given by its first levels. Inclusion is checked when the
    /// levels are requested.
    pub fn from_levels(name: impl Into<String>, levels: Vec<LatticeGroup>) -> Self {
        LevelledGroup { name: name.into(), source: Source::Explicit(levels) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family_kind(&self) -> Option<Family> {
        match self.source {
            Source::Family(f) => Some(f),
            Source::Explicit(_) => None,
        }
    }

    /// Generators of level `k ≥ 1`, listed cumulatively so that every
    /// level's list extends the previous one. `depth` fixes the ambient
    /// dimension for families that need one.
    fn level_generators(f: Family, k: usize, depth: usize) -> Vec<RatVector> {
        match f {
            Family::FreeOmega => (0..k)
                .map(|i| RatVector::from_ints((0..depth).map(|j| i64::from(i == j))))
                .collect(),
            Family::RationalsFactorial => {
                let mut fact = BigInt::one();
                (1..=k)
                    .map(|i| {
                        fact *= BigInt::from(i);
                        RatVector::new(vec![BigRational::new(BigInt::one(), fact.clone())])
                    })
                    .collect()
            }
            Family::DyadicRationals => (0..=k)
                .map(|i| RatVector::new(vec![BigRational::new(BigInt::one(), BigInt::one() << i)]))
                .collect(),
        }
    }

    /// `G₁, …, G_depth` in a common ambient space, with `G_k ⊆ G_{k+1}` verified.
    pub fn levels(&self, depth: usize) -> Result<Vec<LatticeGroup>, GroupError> {
        if depth == 0 {
            return Err(GroupError::InvalidDepth);
        }
        let levels: Vec<LatticeGroup> = match &self.source {
            Source::Family(f) => (1..=depth)
                .map(|k| {
                    let dim = if *f == Family::FreeOmega { depth } else { 1 };
                    LatticeGroup::new(dim, Self::level_generators(*f, k, depth))
                })
                .collect::<Result<_, _>>()?,
            Source::Explicit(ls) => {
                if ls.len() < depth {
                    return Err(GroupError::MalformedFamily {
                        level: ls.len() + 1,
                        detail: format!("only {} levels are defined", ls.len()),
                    });
                }
                ls[..depth].to_vec()
            }
        };
        for (k, pair) in levels.windows(2).enumerate() {
            if pair[0].ambient_dim() != pair[1].ambient_dim() {
                return Err(GroupError::MalformedFamily {
                    level: k + 2,
                    detail: "levels live in different ambient spaces".into(),
                });
            }
            if let Some(x) = pair[0].generators().iter().find(|x| !pair[1].contains(x)) {
                return Err(GroupError::MalformedFamily {
                    level: k + 2,
                    detail: format!("level {} does not contain {x} from level {}", k + 2, k + 1),
                });
            }
        }
        Ok(levels)
    }

    /// Primes for which the family answers divisibility questions.
    pub fn oracle_primes(&self) -> &'static [u64] {
        match self.source {
            Source::Family(Family::DyadicRationals) => &[2],
            _ => &[],
        }
    }

    /// Exact `p`-height of `y` in the whole group, where the family knows it.
    pub fn divisibility_oracle(&self, y: &RatVector, p: u64) -> Option<Height> {
        match self.source {
            Source::Family(Family::DyadicRationals) => {
                let q = y.entries().first()?;
                if q.is_zero() || p == 2 {
                    return Some(Height::Infinite);
                }
                // y = a / 2^e; y = pʰ z inside ℤ[1/2] iff pʰ | a
                let mut a = q.numer().clone();
                let p = BigInt::from(p);
                let mut h = 0;
                while a.is_multiple_of(&p) {
                    a /= &p;
                    h += 1;
                }
                Some(Height::Finite(h))
            }
            _ => None,
        }
    }
}
