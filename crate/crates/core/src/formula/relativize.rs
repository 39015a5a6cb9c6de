use super::{Formula, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RelativizeError {
    #[error("model variable '{0}' already occurs in the formula")]
    CaptureHazard(Var),
}

/// Relativizes `phi` to the class named by `model`.
///
/// Atoms are unchanged and connectives are handled node by node.
/// `∃x φ` becomes `∃x (x ∈ M ∧ φᴹ)`; `∀x φ` is read as `¬∃x ¬φ` first.
/// Bounded quantifiers are expanded before relativizing.
pub fn relativize(phi: &Formula, model: &Var) -> Result<Formula, RelativizeError> {
    if phi.all_variables().contains(model) {
        return Err(RelativizeError::CaptureHazard(model.clone()));
    }
    Ok(rel(phi, model))
}

fn rel(phi: &Formula, m: &Var) -> Formula {
    let guard = |x: &Var| Formula::mem(x.clone(), m.clone());
    match phi {
        Formula::Eq(..) | Formula::Mem(..) => phi.clone(),
        Formula::Not(p) => Formula::not(rel(p, m)),
        Formula::And(p, q) => Formula::and(rel(p, m), rel(q, m)),
        Formula::Or(p, q) => Formula::or(rel(p, m), rel(q, m)),
        Formula::Implies(p, q) => Formula::implies(rel(p, m), rel(q, m)),
        Formula::Iff(p, q) => Formula::iff(rel(p, m), rel(q, m)),
        Formula::Exists(x, p) => Formula::exists(x.clone(), Formula::and(guard(x), rel(p, m))),
        Formula::Forall(x, p) => Formula::not(Formula::exists(
            x.clone(),
            Formula::and(guard(x), Formula::not(rel(p, m))),
        )),
        Formula::BoundedExists(..) | Formula::BoundedForall(..) => {
            // desugar only the head; the body is handled by the recursive call
            let head = match phi {
                Formula::BoundedExists(x, y, p) => {
                    Formula::exists(x.clone(), Formula::and(Formula::mem(x.clone(), y.clone()), (**p).clone()))
                }
                Formula::BoundedForall(x, y, p) => Formula::forall(
                    x.clone(),
                    Formula::or(Formula::not(Formula::mem(x.clone(), y.clone())), (**p).clone()),
                ),
                _ => unreachable!(),
            };
            rel(&head, m)
        }
    }
}
