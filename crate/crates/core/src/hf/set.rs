use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// A hereditarily finite set.
///
/// Children are kept sorted by Ackermann index, where
/// `HF(n) = { HF(i) : bit i of n is 1 }`. The index is cached, so equality,
/// ordering and hashing never recurse.
#[derive(Clone)]
pub struct HfSet(Arc<Node>);

struct Node {
    index: BigUint,
    rank: usize,
    children: Vec<HfSet>,
}

impl HfSet {
    pub fn empty() -> Self {
        HfSet(Arc::new(Node { index: BigUint::zero(), rank: 0, children: Vec::new() }))
    }

    /// Builds `{c : c in children}`, dropping duplicates.
    ///
    /// Panics if a child's index does not fit in 32 bits (the resulting
    /// index would need more than 512 MiB).
    pub fn from_children(children: impl IntoIterator<Item = HfSet>) -> Self {
        let mut children: Vec<HfSet> = children.into_iter().collect();
        children.sort();
        children.dedup();
        let mut index = BigUint::zero();
        for c in &children {
            let bit = c
                .0
                .index
                .to_u32()
                .expect("child Ackermann index too large to encode");
            index.set_bit(u64::from(bit), true);
        }
        let rank = children.iter().map(|c| c.rank() + 1).max().unwrap_or(0);
        HfSet(Arc::new(Node { index, rank, children }))
    }

    /// Inverse of [`HfSet::index`].
    pub fn decode(index: &BigUint) -> Self {
        let children = (0..index.bits())
            .filter(|&i| index.bit(i))
            .map(|i| HfSet::decode(&BigUint::from(i)));
        HfSet::from_children(children)
    }

    pub fn from_index(index: u64) -> Self {
        HfSet::decode(&BigUint::from(index))
    }

    pub fn singleton(x: HfSet) -> Self {
        HfSet::from_children([x])
    }

    pub fn pair(x: HfSet, y: HfSet) -> Self {
        HfSet::from_children([x, y])
    }

    /// The von Neumann ordinal `n = {0, …, n-1}`.
    pub fn ordinal(n: usize) -> Self {
        let mut cur = HfSet::empty();
        for _ in 0..n {
            cur = HfSet::from_children(cur.children().iter().cloned().chain([cur.clone()]));
        }
        cur
    }

    pub fn power_set(&self) -> Self {
        let n = self.len();
        assert!(n < 20, "power set of a {n}-element set is too large");
        let subsets = (0u32..1 << n).map(|mask| {
            HfSet::from_children(
                self.children()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, c)| c.clone()),
            )
        });
        HfSet::from_children(subsets)
    }

    pub fn index(&self) -> &BigUint {
        &self.0.index
    }

    pub fn index_u64(&self) -> Option<u64> {
        self.0.index.to_u64()
    }

    /// `0` for the empty set, otherwise `1 + max rank of a child`.
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn children(&self) -> &[HfSet] {
        &self.0.children
    }

    pub fn len(&self) -> usize {
        self.0.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.children.is_empty()
    }

    /// `x ∈ self`.
    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.children.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &HfSet) -> bool {
        self.children().iter().all(|c| other.contains(c))
    }

    pub fn is_transitive(&self) -> bool {
        self.children().iter().all(|c| c.is_subset(self))
    }

    /// The smallest transitive set containing every element of `self`.
    pub fn transitive_closure(&self) -> HfSet {
        let mut seen: BTreeSet<HfSet> = BTreeSet::new();
        let mut stack: Vec<HfSet> = self.children().to_vec();
        while let Some(x) = stack.pop() {
            if seen.insert(x.clone()) {
                stack.extend(x.children().iter().cloned());
            }
        }
        HfSet::from_children(seen)
    }
}

impl PartialEq for HfSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.index == other.0.index
    }
}

impl Eq for HfSet {}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HfSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.index.cmp(&other.0.index)
    }
}

impl Hash for HfSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.index.hash(state);
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, c) in self.children().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HF({}) = {self}", self.0.index)
    }
}
