//! Hereditarily finite sets, finite models built from them, and the
//! absoluteness scanner.

mod eval;
mod model;
mod scan;
mod set;

use num_bigint::BigUint;

use crate::formula::Var;

pub use eval::{evaluate, resolve_assignment, Assignment, CompiledFormula, ElementId, Structure};
pub use model::{v_level, ModelDomain, ModelFile, MAX_V_LEVEL};
pub use scan::{absoluteness_scan, AbsolutenessReport, ScanFailure, MAX_SCAN_ASSIGNMENTS};
pub use set::HfSet;

/// Smallest transitive set containing every element of `x`.
pub fn transitive_closure(x: &HfSet) -> HfSet {
    x.transitive_closure()
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HfError {
    #[error("V_{0} is too large to build (k must be at most {max})", max = MAX_V_LEVEL)]
    LevelTooLarge(usize),
    #[error("free variable '{0}' has no assigned value")]
    UnassignedVariable(Var),
    #[error("value HF({index}) assigned to '{var}' is not an element of domain {domain}")]
    OutsideDomain { var: Var, index: BigUint, domain: String },
    #[error("domain {domain} is not transitive: HF({missing}) ∈ HF({element}) is missing")]
    NotTransitive { domain: String, element: BigUint, missing: BigUint },
    #[error("domain {inner} is not contained in {outer}: HF({element}) is missing")]
    NotSubdomain { inner: String, outer: String, element: BigUint },
    #[error("scan over {domain_size} elements with {free_variables} free variables exceeds {limit} assignments")]
    TooManyAssignments { domain_size: usize, free_variables: usize, limit: u64 },
    #[error("{0}")]
    TooLarge(String),
}
