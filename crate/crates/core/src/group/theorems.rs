//! Finitely generated instances of the extension and splitting theorems.
//!
//! At finite rank a subgroup of `ℚⁿ` is free, and a finitely presented
//! group is free iff it is torsion-free, so both statements become checks
//! on Smith forms and change-of-basis determinants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ops::{complement_summand, is_pure, pure_closure, quotient_presentation, verify_complement};
use super::{GeneratorSet, GroupError, LatticeGroup};
use crate::linalg::{snf, RatVector};
use crate::SCHEMA_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    PremiseSatisfied,
    Vacuous,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub outcome: Outcome,
    pub detail: String,
}

impl TheoremCheck {
    fn new(outcome: Outcome, detail: impl Into<String>) -> Self {
        TheoremCheck { outcome, detail: detail.into() }
    }
}

/// `H` free and `G/H` free imply `G` free.
///
/// When the premise holds, a basis of `G` is assembled from `H`'s basis and
/// lifts of a quotient basis taken from the Smith transform, and its
/// change-of-basis determinant is required to be ±1.
pub fn check_transitivity_theorem(h: &LatticeGroup, g: &LatticeGroup) -> Result<TheoremCheck, GroupError> {
    h.require_subgroup_of(g, "H")?;
    let h_free = h.presentation().is_free();
    let q = quotient_presentation(g, h)?;
    if !(h_free && q.is_free()) {
        return Ok(TheoremCheck::new(
            Outcome::Vacuous,
            format!("quotient torsion {:?}", q.torsion_coefficients().iter().map(ToString::to_string).collect::<Vec<_>>()),
        ));
    }
    let s = snf(q.relations());
    let k = q.num_generators();
    let c = h.coordinates_in(g)?;
    // with trivial invariant factors, rows 0..r of V⁻¹ span H and the rest lift G/H
    let lift = s.v_inv.select_rows(s.rank..k);
    let basis = c.stack(&lift)?;
    let det = if basis.is_square() { basis.determinant()? } else { BigInt::from(0) };
    if !det.abs().is_one() || !g.presentation().is_free() {
        return Ok(TheoremCheck::new(Outcome::Violation, format!("lifted basis has determinant {det}")));
    }
    Ok(TheoremCheck::new(Outcome::PremiseSatisfied, "lifted basis has determinant ±1"))
}

/// `H` pure in free `G` implies `G/H` free and `H` a direct summand.
pub fn check_quotient_theorem(g: &LatticeGroup, h: &LatticeGroup) -> Result<TheoremCheck, GroupError> {
    h.require_subgroup_of(g, "H")?;
    let q = quotient_presentation(g, h)?;
    if !is_pure(h, g)?.pure {
        let detail = if q.is_free() { "not pure; quotient free" } else { "not pure; quotient has torsion" };
        return Ok(TheoremCheck::new(Outcome::Vacuous, detail));
    }
    if !q.is_free() {
        return Ok(TheoremCheck::new(Outcome::Violation, "pure subgroup with torsion quotient"));
    }
    match complement_summand(g, h) {
        Ok(c) if verify_complement(g, h, &c.complement) => {
            Ok(TheoremCheck::new(Outcome::PremiseSatisfied, format!("complement of rank {}", c.complement.basis().len())))
        }
        Ok(_) => Ok(TheoremCheck::new(Outcome::Violation, "complement failed re-verification")),
        Err(e) => Ok(TheoremCheck::new(Outcome::Violation, format!("no complement: {e}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFailure {
    pub trial: usize,
    pub g: Vec<RatVector>,
    pub h: Vec<RatVector>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub schema_version: u32,
    pub theorem: String,
    pub seed: u64,
    pub trials: usize,
    pub premise_satisfied: usize,
    pub vacuous: usize,
    pub violations: usize,
    /// Vacuous instances whose quotient has torsion. For the splitting
    /// theorem this is every non-pure instance.
    pub vacuous_with_torsion: usize,
    pub failures: Vec<InstanceFailure>,
}

/// A random `(G, H)` with `H ≤ G`: `G` has up to 4 generators in `ℚ^dim`,
/// `dim ≤ 4`, numerators in `[-9, 9]` and small denominators; `H` is spanned
/// by integer combinations of `G`'s generators and is replaced by its pure
/// closure half of the time.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (LatticeGroup, LatticeGroup) {
    let dim = rng.gen_range(1..=4);
    let ngens = rng.gen_range(1..=4);
    let gens: Vec<RatVector> = (0..ngens)
        .map(|_| {
            let den: i64 = if rng.gen_bool(0.25) { rng.gen_range(2..=3) } else { 1 };
            RatVector::new(
                (0..dim)
                    .map(|_| BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(den)))
                    .collect(),
            )
        })
        .collect();
    let g = LatticeGroup::new(dim, gens.clone()).expect("dimensions agree");
    let nsub = rng.gen_range(0..=3);
    let sub: Vec<RatVector> = (0..nsub)
        .map(|_| {
            gens.iter()
                .fold(RatVector::zero(dim), |acc, x| acc.add(&x.scale_int(&BigInt::from(rng.gen_range(-3i64..=3)))))
        })
        .collect();
    let mut h = LatticeGroup::new(dim, sub.clone()).expect("dimensions agree");
    if rng.gen_bool(0.5) {
        h = pure_closure(&g, &GeneratorSet::new(sub)).expect("combinations lie in G");
    }
    (g, h)
}

fn run<F>(theorem: &str, trials: usize, seed: u64, check: F) -> Result<HarnessReport, GroupError>
where
    F: Fn(&LatticeGroup, &LatticeGroup) -> Result<TheoremCheck, GroupError>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = HarnessReport {
        schema_version: SCHEMA_VERSION,
        theorem: theorem.to_owned(),
        seed,
        trials,
        premise_satisfied: 0,
        vacuous: 0,
        violations: 0,
        vacuous_with_torsion: 0,
        failures: Vec::new(),
    };
    for trial in 0..trials {
        let (g, h) = random_instance(&mut rng);
        let r = check(&g, &h)?;
        match r.outcome {
            Outcome::PremiseSatisfied => report.premise_satisfied += 1,
            Outcome::Vacuous => {
                report.vacuous += 1;
                if quotient_presentation(&g, &h)?.is_free() {
                    continue;
                }
                report.vacuous_with_torsion += 1;
            }
            Outcome::Violation => {
                report.violations += 1;
                report.failures.push(InstanceFailure {
                    trial,
                    g: g.generators().to_vec(),
                    h: h.generators().to_vec(),
                    detail: r.detail,
                });
            }
        }
    }
    Ok(report)
}

pub fn run_transitivity_harness(trials: usize, seed: u64) -> Result<HarnessReport, GroupError> {
    run("extension", trials, seed, |g, h| check_transitivity_theorem(h, g))
}

pub fn run_quotient_harness(trials: usize, seed: u64) -> Result<HarnessReport, GroupError> {
    run("pure-splitting", trials, seed, check_quotient_theorem)
}
