//! First-order formulas over the language `{=, ∈}`.
//!
//! The AST keeps bounded quantifiers as first-class nodes so the Δ₀
//! recognizer can cite them directly; [`Formula::desugar`] rewrites them to
//! their unbounded expansions when a plain first-order shape is needed.

mod delta0;
mod parser;
mod relativize;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use delta0::{is_delta0, Delta0Rule, Delta0Verdict, TraceEntry};
pub use parser::{parse_formula, ParseError};
pub use relativize::{relativize, RelativizeError};

/// A variable name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_owned())
    }
}

impl From<String> for Var {
    fn from(s: String) -> Self {
        Var(s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Eq(Var, Var),
    Mem(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
    /// `exists x in y (φ)`: variable, bounding variable, body.
    BoundedExists(Var, Var, Box<Formula>),
    /// `forall x in y (φ)`: variable, bounding variable, body.
    BoundedForall(Var, Var, Box<Formula>),
}

impl Formula {
    pub fn eq(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        Formula::Eq(a.into(), b.into())
    }

    pub fn mem(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        Formula::Mem(a.into(), b.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(phi: Formula) -> Self {
        Formula::Not(Box::new(phi))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(x: impl Into<Var>, body: Formula) -> Self {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn forall(x: impl Into<Var>, body: Formula) -> Self {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn bounded_exists(x: impl Into<Var>, y: impl Into<Var>, body: Formula) -> Self {
        Formula::BoundedExists(x.into(), y.into(), Box::new(body))
    }

    pub fn bounded_forall(x: impl Into<Var>, y: impl Into<Var>, body: Formula) -> Self {
        Formula::BoundedForall(x.into(), y.into(), Box::new(body))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Mem(..))
    }

    fn is_binary(&self) -> bool {
        matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Iff(..)
        )
    }

    /// Free variables, in name order.
    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut BTreeSet<Var>) {
        let mut note = |v: &'a Var, bound: &Vec<&'a Var>| {
            if !bound.contains(&v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Eq(a, b) | Formula::Mem(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Formula::Not(p) => p.collect_free(bound, out),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) | Formula::Iff(p, q) => {
                p.collect_free(bound, out);
                q.collect_free(bound, out);
            }
            Formula::Exists(x, p) | Formula::Forall(x, p) => {
                bound.push(x);
                p.collect_free(bound, out);
                bound.pop();
            }
            Formula::BoundedExists(x, y, p) | Formula::BoundedForall(x, y, p) => {
                // the bounding variable sits outside the binder's scope
                note(y, bound);
                bound.push(x);
                p.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.clone());
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(&Var)) {
        match self {
            Formula::Eq(a, b) | Formula::Mem(a, b) => {
                f(a);
                f(b);
            }
            Formula::Not(p) => p.visit_vars(f),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) | Formula::Iff(p, q) => {
                p.visit_vars(f);
                q.visit_vars(f);
            }
            Formula::Exists(x, p) | Formula::Forall(x, p) => {
                f(x);
                p.visit_vars(f);
            }
            Formula::BoundedExists(x, y, p) | Formula::BoundedForall(x, y, p) => {
                f(x);
                f(y);
                p.visit_vars(f);
            }
        }
    }

    /// Rewrites `∃x∈y φ` to `∃x (x ∈ y ∧ φ)` and `∀x∈y φ` to `∀x (¬(x ∈ y) ∨ φ)`.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Eq(..) | Formula::Mem(..) => self.clone(),
            Formula::Not(p) => Formula::not(p.desugar()),
            Formula::And(p, q) => Formula::and(p.desugar(), q.desugar()),
            Formula::Or(p, q) => Formula::or(p.desugar(), q.desugar()),
            Formula::Implies(p, q) => Formula::implies(p.desugar(), q.desugar()),
            Formula::Iff(p, q) => Formula::iff(p.desugar(), q.desugar()),
            Formula::Exists(x, p) => Formula::exists(x.clone(), p.desugar()),
            Formula::Forall(x, p) => Formula::forall(x.clone(), p.desugar()),
            Formula::BoundedExists(x, y, p) => Formula::exists(
                x.clone(),
                Formula::and(Formula::mem(x.clone(), y.clone()), p.desugar()),
            ),
            Formula::BoundedForall(x, y, p) => Formula::forall(
                x.clone(),
                Formula::or(Formula::not(Formula::mem(x.clone(), y.clone())), p.desugar()),
            ),
        }
    }

    /// Number of nested connective/quantifier layers; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Mem(..) => 0,
            Formula::Not(p)
            | Formula::Exists(_, p)
            | Formula::Forall(_, p)
            | Formula::BoundedExists(_, _, p)
            | Formula::BoundedForall(_, _, p) => 1 + p.depth(),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) | Formula::Iff(p, q) => {
                1 + p.depth().max(q.depth())
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, phi: &Formula) -> fmt::Result {
    if phi.is_binary() {
        write!(f, "({phi})")
    } else {
        write!(f, "{phi}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let binary = |f: &mut fmt::Formatter<'_>, p: &Formula, op: &str, q: &Formula| {
            write_operand(f, p)?;
            write!(f, " {op} ")?;
            write_operand(f, q)
        };
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Mem(a, b) => write!(f, "{a} in {b}"),
            Formula::Not(p) => {
                f.write_str("not ")?;
                write_operand(f, p)
            }
            Formula::And(p, q) => binary(f, p, "and", q),
            Formula::Or(p, q) => binary(f, p, "or", q),
            Formula::Implies(p, q) => binary(f, p, "->", q),
            Formula::Iff(p, q) => binary(f, p, "<->", q),
            Formula::Exists(x, p) => write!(f, "exists {x} ({p})"),
            Formula::Forall(x, p) => write!(f, "forall {x} ({p})"),
            Formula::BoundedExists(x, y, p) => write!(f, "exists {x} in {y} ({p})"),
            Formula::BoundedForall(x, y, p) => write!(f, "forall {x} in {y} ({p})"),
        }
    }
}
