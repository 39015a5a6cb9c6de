use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{HfError, HfSet};
use crate::codec::AckermannIndex;

/// Largest `k` accepted by [`v_level`]; `|V₆| = 2^65536`.
pub const MAX_V_LEVEL: usize = 5;

/// A finite universe of hereditarily finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDomain {
    name: String,
    elements: Vec<HfSet>,
}

/// On-disk form: a name plus the Ackermann indices of the elements.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub name: String,
    pub elements: Vec<AckermannIndex>,
}

impl ModelDomain {
    pub fn new(name: impl Into<String>, elements: impl IntoIterator<Item = HfSet>) -> Self {
        let mut elements: Vec<HfSet> = elements.into_iter().collect();
        elements.sort();
        elements.dedup();
        ModelDomain { name: name.into(), elements }
    }

    /// The domain `tc({x₁,…,xₙ})`: the given sets plus everything below them.
    pub fn closure_of(name: impl Into<String>, sets: impl IntoIterator<Item = HfSet>) -> Self {
        let top = HfSet::from_children(sets);
        let mut all: BTreeSet<HfSet> = top.transitive_closure().children().iter().cloned().collect();
        all.extend(top.children().iter().cloned());
        ModelDomain::new(name, all)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn elements(&self) -> &[HfSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// Position of `x` in the sorted element list.
    pub fn position(&self, x: &HfSet) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    pub fn is_subdomain_of(&self, other: &ModelDomain) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    /// Every child of every element is an element.
    pub fn is_transitive(&self) -> bool {
        self.first_transitivity_gap().is_none()
    }

    /// `(element, child)` with `child ∈ element` but `child ∉ self`.
    pub fn first_transitivity_gap(&self) -> Option<(HfSet, HfSet)> {
        self.elements.iter().find_map(|x| {
            x.children()
                .iter()
                .find(|c| !self.contains(c))
                .map(|c| (x.clone(), c.clone()))
        })
    }

    pub fn require_transitive(&self) -> Result<(), HfError> {
        match self.first_transitivity_gap() {
            None => Ok(()),
            Some((element, missing)) => Err(HfError::NotTransitive {
                domain: self.name.clone(),
                element: element.index().clone(),
                missing: missing.index().clone(),
            }),
        }
    }

    /// The domain as a single set, i.e. the set whose elements are `self`'s elements.
    pub fn as_set(&self) -> HfSet {
        HfSet::from_children(self.elements.iter().cloned())
    }

    /// All transitive subdomains, ordered by the bitmask of chosen elements.
    /// Limited to domains of at most 20 elements.
    pub fn transitive_subdomains(&self) -> Result<Vec<ModelDomain>, HfError> {
        let n = self.len();
        if n > 20 {
            return Err(HfError::TooLarge(format!(
                "{n}-element domain has too many subdomains to enumerate"
            )));
        }
        // child positions for each element; every element's children must be
        // inside the subset for the subset to be transitive
        let child_masks: Vec<Option<u32>> = self
            .elements
            .iter()
            .map(|x| {
                x.children()
                    .iter()
                    .try_fold(0u32, |m, c| self.position(c).map(|p| m | (1 << p)))
            })
            .collect();
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let ok = (0..n).filter(|i| mask & (1 << i) != 0).all(|i| match child_masks[i] {
                Some(cm) => cm & !mask == 0,
                None => false,
            });
            if ok {
                let elems = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.elements[i].clone());
                out.push(ModelDomain::new(format!("{}[mask={mask}]", self.name), elems));
            }
        }
        Ok(out)
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            name: self.name.clone(),
            elements: self.elements.iter().map(|x| AckermannIndex(x.index().clone())).collect(),
        }
    }

    pub fn from_file(file: &ModelFile) -> Self {
        ModelDomain::new(file.name.clone(), file.elements.iter().map(|i| HfSet::decode(&i.0)))
    }
}

/// `V_k`: `V₀ = ∅`, `V_{i+1} = P(V_i)`.
///
/// `V_k` is exactly `{ HF(n) : n < |V_k| }`, so the construction simply
/// decodes the first `|V_k|` indices.
pub fn v_level(k: usize) -> Result<ModelDomain, HfError> {
    if k > MAX_V_LEVEL {
        return Err(HfError::LevelTooLarge(k));
    }
    let mut size: u64 = 0;
    for _ in 0..k {
        size = 1u64 << size;
    }
    Ok(ModelDomain::new(format!("V{k}"), (0..size).map(|i| HfSet::decode(&BigUint::from(i)))))
}
