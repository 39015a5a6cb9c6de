use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eval::{CompiledFormula, ElementId, Structure};
use super::{HfError, ModelDomain};
use crate::codec::AckermannIndex;
use crate::formula::{Formula, Var};
use crate::SCHEMA_VERSION;

/// Upper bound on assignments a single scan will enumerate.
pub const MAX_SCAN_ASSIGNMENTS: u64 = 10_000_000;

const CHUNK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFailure {
    pub assignment: BTreeMap<Var, AckermannIndex>,
    pub in_m: bool,
    pub in_n: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsolutenessReport {
    pub schema_version: u32,
    pub formula: String,
    pub m: String,
    pub n: String,
    /// The finite stand-in for the universe this scan was run against.
    pub ambient: String,
    pub free_variables: Vec<Var>,
    pub assignments: u64,
    pub agreed: u64,
    pub failures: Vec<ScanFailure>,
    pub absolute: bool,
}

/// Compares `phi` in `m` and in `n` for every assignment of its free
/// variables into `m`.
///
/// Both domains must be transitive and `m ⊆ n`. Failures are listed in
/// assignment order: free variables in name order, the first one most
/// significant, each ranging over `m` by Ackermann index.
pub fn absoluteness_scan(phi: &Formula, m: &ModelDomain, n: &ModelDomain) -> Result<AbsolutenessReport, HfError> {
    m.require_transitive()?;
    n.require_transitive()?;
    if let Some(x) = m.elements().iter().find(|x| !n.contains(x)) {
        return Err(HfError::NotSubdomain {
            inner: m.name().to_owned(),
            outer: n.name().to_owned(),
            element: x.index().clone(),
        });
    }

    let compiled = CompiledFormula::compile(phi);
    let free = compiled.free_slots().to_vec();
    let arity = free.len() as u32;
    let base = m.len() as u64;
    let total = base
        .checked_pow(arity)
        .filter(|&t| t <= MAX_SCAN_ASSIGNMENTS)
        .ok_or_else(|| HfError::TooManyAssignments {
            domain_size: m.len(),
            free_variables: free.len(),
            limit: MAX_SCAN_ASSIGNMENTS,
        })?;

    let sm = Structure::new(m);
    let sn = Structure::new(n);
    // element id in m -> element id in n
    let lift: Vec<ElementId> = m
        .elements()
        .iter()
        .map(|x| sn.id_of(x).expect("subdomain checked above"))
        .collect();

    let chunks: Vec<u64> = (0..total.div_ceil(CHUNK)).collect();
    let failures: Vec<(Vec<ElementId>, bool, bool)> = chunks
        .par_iter()
        .flat_map_iter(|&c| {
            let mut local = Vec::new();
            let mut env_m = vec![0 as ElementId; free.len()];
            let mut env_n = vec![0 as ElementId; free.len()];
            for code in c * CHUNK..((c + 1) * CHUNK).min(total) {
                decode_assignment(code, base, &mut env_m);
                for (dst, &src) in env_n.iter_mut().zip(&env_m) {
                    *dst = lift[src as usize];
                }
                let in_m = sm.eval(&compiled, &env_m);
                let in_n = sn.eval(&compiled, &env_n);
                if in_m != in_n {
                    local.push((env_m.clone(), in_m, in_n));
                }
            }
            local
        })
        .collect();

    let failures: Vec<ScanFailure> = failures
        .into_iter()
        .map(|(env, in_m, in_n)| ScanFailure {
            assignment: free
                .iter()
                .zip(env)
                .map(|(v, id)| (v.clone(), AckermannIndex(m.elements()[id as usize].index().clone())))
                .collect(),
            in_m,
            in_n,
        })
        .collect();

    Ok(AbsolutenessReport {
        schema_version: SCHEMA_VERSION,
        formula: phi.to_string(),
        m: m.name().to_owned(),
        n: n.name().to_owned(),
        ambient: n.name().to_owned(),
        free_variables: free,
        assignments: total,
        agreed: total - failures.len() as u64,
        absolute: failures.is_empty(),
        failures,
    })
}

/// Mixed-radix decoding with the first variable most significant.
fn decode_assignment(mut code: u64, base: u64, env: &mut [ElementId]) {
    for slot in env.iter_mut().rev() {
        *slot = (code % base) as ElementId;
        code /= base;
    }
}
