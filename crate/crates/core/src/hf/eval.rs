//! Tarskian evaluation of formulas in a finite ∈-structure.

use std::collections::BTreeMap;

use super::{HfError, HfSet, ModelDomain};
use crate::formula::{Formula, Var};

/// Element ids are positions in the domain's sorted element list.
pub type ElementId = u32;

/// A domain prepared for repeated evaluation: membership is tabulated and
/// each element carries the list of domain elements it contains.
pub struct Structure<'d> {
    domain: &'d ModelDomain,
    size: usize,
    member: Vec<bool>,
    members_of: Vec<Vec<ElementId>>,
}

impl<'d> Structure<'d> {
    pub fn new(domain: &'d ModelDomain) -> Self {
        let size = domain.len();
        let mut member = vec![false; size * size];
        let mut members_of = vec![Vec::new(); size];
        for (b, y) in domain.elements().iter().enumerate() {
            for c in y.children() {
                if let Some(a) = domain.position(c) {
                    member[a * size + b] = true;
                    members_of[b].push(a as ElementId);
                }
            }
        }
        Structure { domain, size, member, members_of }
    }

    pub fn domain(&self) -> &ModelDomain {
        self.domain
    }

    pub fn id_of(&self, x: &HfSet) -> Option<ElementId> {
        self.domain.position(x).map(|p| p as ElementId)
    }

    /// Evaluates `phi` with `env[i]` bound to `phi.free_slots()[i]`.
    pub fn eval(&self, phi: &CompiledFormula, env: &[ElementId]) -> bool {
        assert_eq!(env.len(), phi.free.len(), "assignment arity mismatch");
        let mut slots = vec![0 as ElementId; phi.slots];
        slots[..env.len()].copy_from_slice(env);
        self.eval_node(&phi.root, &mut slots)
    }

    fn eval_node(&self, node: &Node, env: &mut [ElementId]) -> bool {
        match node {
            Node::Eq(a, b) => env[*a] == env[*b],
            Node::Mem(a, b) => self.member[env[*a] as usize * self.size + env[*b] as usize],
            Node::Not(p) => !self.eval_node(p, env),
            Node::And(p, q) => self.eval_node(p, env) && self.eval_node(q, env),
            Node::Or(p, q) => self.eval_node(p, env) || self.eval_node(q, env),
            Node::Implies(p, q) => !self.eval_node(p, env) || self.eval_node(q, env),
            Node::Iff(p, q) => self.eval_node(p, env) == self.eval_node(q, env),
            Node::Exists(x, p) => (0..self.size as ElementId).any(|v| {
                env[*x] = v;
                self.eval_node(p, env)
            }),
            Node::Forall(x, p) => (0..self.size as ElementId).all(|v| {
                env[*x] = v;
                self.eval_node(p, env)
            }),
            // `∃x∈y φ` desugars to `∃x (x ∈ y ∧ φ)` with x ranging over the
            // domain; only domain members of y can satisfy the guard
            Node::BoundedExists(x, y, p) => {
                let ys = &self.members_of[env[*y] as usize];
                ys.iter().any(|&v| {
                    env[*x] = v;
                    self.eval_node(p, env)
                })
            }
            Node::BoundedForall(x, y, p) => {
                let ys = &self.members_of[env[*y] as usize];
                ys.iter().all(|&v| {
                    env[*x] = v;
                    self.eval_node(p, env)
                })
            }
        }
    }
}

type Slot = usize;

enum Node {
    Eq(Slot, Slot),
    Mem(Slot, Slot),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Exists(Slot, Box<Node>),
    Forall(Slot, Box<Node>),
    BoundedExists(Slot, Slot, Box<Node>),
    BoundedForall(Slot, Slot, Box<Node>),
}

/// A formula with variables resolved to environment slots. Free variables
/// occupy the first slots, in name order.
pub struct CompiledFormula {
    free: Vec<Var>,
    slots: usize,
    root: Node,
}

impl CompiledFormula {
    pub fn compile(phi: &Formula) -> Self {
        let free: Vec<Var> = phi.free_variables().into_iter().collect();
        let mut scope: Vec<(Var, Slot)> = free.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut next = free.len();
        let mut max = next;
        let root = compile_node(phi, &mut scope, &mut next, &mut max);
        CompiledFormula { free, slots: max, root }
    }

    /// Free variables in slot order.
    pub fn free_slots(&self) -> &[Var] {
        &self.free
    }
}

fn lookup(scope: &[(Var, Slot)], v: &Var) -> Slot {
    scope
        .iter()
        .rev()
        .find(|(name, _)| name == v)
        .map(|(_, s)| *s)
        .expect("free variables are pre-bound")
}

fn compile_node(phi: &Formula, scope: &mut Vec<(Var, Slot)>, next: &mut Slot, max: &mut Slot) -> Node {
    let mut bind = |x: &Var, body: &Formula, scope: &mut Vec<(Var, Slot)>| {
        let slot = *next;
        *next += 1;
        *max = (*max).max(*next);
        scope.push((x.clone(), slot));
        let inner = compile_node(body, scope, next, max);
        scope.pop();
        *next -= 1;
        (slot, Box::new(inner))
    };
    match phi {
        Formula::Eq(a, b) => Node::Eq(lookup(scope, a), lookup(scope, b)),
        Formula::Mem(a, b) => Node::Mem(lookup(scope, a), lookup(scope, b)),
        Formula::Not(p) => Node::Not(Box::new(compile_node(p, scope, next, max))),
        Formula::And(p, q) => Node::And(
            Box::new(compile_node(p, scope, next, max)),
            Box::new(compile_node(q, scope, next, max)),
        ),
        Formula::Or(p, q) => Node::Or(
            Box::new(compile_node(p, scope, next, max)),
            Box::new(compile_node(q, scope, next, max)),
        ),
        Formula::Implies(p, q) => Node::Implies(
            Box::new(compile_node(p, scope, next, max)),
            Box::new(compile_node(q, scope, next, max)),
        ),
        Formula::Iff(p, q) => Node::Iff(
            Box::new(compile_node(p, scope, next, max)),
            Box::new(compile_node(q, scope, next, max)),
        ),
        Formula::Exists(x, p) => {
            let (s, b) = bind(x, p, scope);
            Node::Exists(s, b)
        }
        Formula::Forall(x, p) => {
            let (s, b) = bind(x, p, scope);
            Node::Forall(s, b)
        }
        Formula::BoundedExists(x, y, p) => {
            let ys = lookup(scope, y);
            let (s, b) = bind(x, p, scope);
            Node::BoundedExists(s, ys, b)
        }
        Formula::BoundedForall(x, y, p) => {
            let ys = lookup(scope, y);
            let (s, b) = bind(x, p, scope);
            Node::BoundedForall(s, ys, b)
        }
    }
}

pub type Assignment = BTreeMap<Var, HfSet>;

/// Truth value of `phi` in `dom` under `assignment`: quantifiers range over
/// the domain, `∈` is membership and `=` is equality of sets.
pub fn evaluate(phi: &Formula, dom: &ModelDomain, assignment: &Assignment) -> Result<bool, HfError> {
    let compiled = CompiledFormula::compile(phi);
    let structure = Structure::new(dom);
    let env = resolve_assignment(&structure, &compiled, assignment)?;
    Ok(structure.eval(&compiled, &env))
}

/// Maps every free variable of `phi` to its element id. Extra entries in
/// `assignment` are ignored.
pub fn resolve_assignment(
    structure: &Structure<'_>,
    phi: &CompiledFormula,
    assignment: &Assignment,
) -> Result<Vec<ElementId>, HfError> {
    phi.free_slots()
        .iter()
        .map(|v| {
            let x = assignment
                .get(v)
                .ok_or_else(|| HfError::UnassignedVariable(v.clone()))?;
            structure.id_of(x).ok_or_else(|| HfError::OutsideDomain {
                var: v.clone(),
                index: x.index().clone(),
                domain: structure.domain().name().to_owned(),
            })
        })
        .collect()
}
