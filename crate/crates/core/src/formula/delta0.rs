use serde::{Deserialize, Serialize};

use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Delta0Rule {
    #[serde(rename = "atomic")]
    Atomic,
    #[serde(rename = "connective")]
    Connective,
    #[serde(rename = "bounded-quantifier")]
    BoundedQuantifier,
    /// `∀x (x ∈ y → φ)`: accepted as bounded via logical equivalence with
    /// `∀x (¬(x ∈ y) ∨ φ)`.
    #[serde(rename = "bounded-quantifier-via-logical-equivalence-alias")]
    BoundedQuantifierAlias,
    #[serde(rename = "VIOLATION-unbounded-quantifier")]
    UnboundedQuantifier,
}

impl Delta0Rule {
    pub fn is_violation(self) -> bool {
        self == Delta0Rule::UnboundedQuantifier
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// Dot-separated child path from the root, e.g. `root.0.1`.
    pub locator: String,
    pub rule: Delta0Rule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delta0Verdict {
    pub verdict: bool,
    pub trace: Vec<TraceEntry>,
}

impl Delta0Verdict {
    pub fn violations(&self) -> impl Iterator<Item = &TraceEntry> {
        self.trace.iter().filter(|e| e.rule.is_violation())
    }
}

/// Classifies `phi` against the inductive Δ₀ rules, recording which rule
/// admitted each node.
pub fn is_delta0(phi: &Formula) -> Delta0Verdict {
    let mut trace = Vec::new();
    walk(phi, "root".to_owned(), &mut trace);
    let verdict = !trace.iter().any(|e| e.rule.is_violation());
    Delta0Verdict { verdict, trace }
}

fn walk(phi: &Formula, loc: String, trace: &mut Vec<TraceEntry>) {
    let child = |i: usize| format!("{loc}.{i}");
    match phi {
        Formula::Eq(..) | Formula::Mem(..) => trace.push(TraceEntry {
            locator: loc,
            rule: Delta0Rule::Atomic,
        }),
        Formula::Not(p) => {
            let c = child(0);
            trace.push(TraceEntry { locator: loc, rule: Delta0Rule::Connective });
            walk(p, c, trace);
        }
        Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) | Formula::Iff(p, q) => {
            let (l, r) = (child(0), child(1));
            trace.push(TraceEntry { locator: loc, rule: Delta0Rule::Connective });
            walk(p, l, trace);
            walk(q, r, trace);
        }
        Formula::BoundedExists(_, _, p) | Formula::BoundedForall(_, _, p) => {
            let c = child(0);
            trace.push(TraceEntry { locator: loc, rule: Delta0Rule::BoundedQuantifier });
            walk(p, c, trace);
        }
        Formula::Exists(x, body) => match body.as_ref() {
            // ∃x (x ∈ y ∧ φ)
            Formula::And(guard, rest) if is_guard(guard, x) => {
                let c = format!("{loc}.0.1");
                trace.push(TraceEntry { locator: loc, rule: Delta0Rule::BoundedQuantifier });
                walk(rest, c, trace);
            }
            _ => unbounded(body, loc, trace),
        },
        Formula::Forall(x, body) => match body.as_ref() {
            // ∀x (¬(x ∈ y) ∨ φ)
            Formula::Or(neg, rest) if matches!(neg.as_ref(), Formula::Not(g) if is_guard(g, x)) => {
                let c = format!("{loc}.0.1");
                trace.push(TraceEntry { locator: loc, rule: Delta0Rule::BoundedQuantifier });
                walk(rest, c, trace);
            }
            // ∀x (x ∈ y → φ)
            Formula::Implies(guard, rest) if is_guard(guard, x) => {
                let c = format!("{loc}.0.1");
                trace.push(TraceEntry { locator: loc, rule: Delta0Rule::BoundedQuantifierAlias });
                walk(rest, c, trace);
            }
            _ => unbounded(body, loc, trace),
        },
    }
}

fn unbounded(body: &Formula, loc: String, trace: &mut Vec<TraceEntry>) {
    let c = format!("{loc}.0");
    trace.push(TraceEntry { locator: loc, rule: Delta0Rule::UnboundedQuantifier });
    walk(body, c, trace);
}

/// `x ∈ y` with `y` a different variable.
fn is_guard(phi: &Formula, x: &super::Var) -> bool {
    matches!(phi, Formula::Mem(a, b) if a == x && b != x)
}
