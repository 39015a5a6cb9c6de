//! Torsion-free abelian groups: lattices in `ℚⁿ`, finite presentations,
//! pure closures, splittings and depth-bounded freeness certificates for
//! countable unions.

mod certify;
mod lattice;
mod levelled;
mod ops;
mod presented;
mod theorems;

pub use certify::{
    colex_subsets, pontryagin_certify, pontryagin_certify_with, verify_witness, ChainStep, DivisorStep, Evidence,
    PontryaginReport, Verdict, Witness, DEFAULT_ESCALATION_THRESHOLD,
};
pub use lattice::{scalar_multiple, GeneratorSet, GroupFile, LatticeGroup};
pub use levelled::{Family, Height, LevelledGroup};
pub use ops::{
    complement_summand, is_pure, max_independent_subset, pure_closure, quotient_presentation, rank0,
    verify_complement, Complement, MaxIndependentResult, PurityReport, PurityWitness,
};
pub use presented::{is_free, is_torsion_free, PresentationFile, PresentedGroup};
pub use theorems::{
    check_quotient_theorem, check_transitivity_theorem, random_instance, run_quotient_harness,
    run_transitivity_harness, HarnessReport, InstanceFailure, Outcome, TheoremCheck,
};

use crate::linalg::{LinalgError, RatVector};

#[derive(Debug, thiserror::Error)]
pub enum GroupError {
    #[error("expected vectors of dimension {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("{what} is not contained in the ambient group: {element} is missing")]
    NotContained { what: String, element: RatVector },
    #[error("subgroup is not pure: {x} = {n}·{y} with {y} outside it", x = .0.x, n = .0.n, y = .0.y)]
    NotPure(Box<PurityWitness>),
    #[error("malformed chain at level {level}: {detail}")]
    MalformedFamily { level: usize, detail: String },
    #[error("depth must be at least 1")]
    InvalidDepth,
    #[error("unknown family `{0}` (expected free-omega, rationals-factorial or dyadic-rationals)")]
    UnknownFamily(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
