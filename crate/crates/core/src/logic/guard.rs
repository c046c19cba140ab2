use super::formula::Formula;
use super::model::FiniteModel;
use crate::error::{invalid, Result};
use std::collections::BTreeSet;

/// Relativizes every quantifier of `phi` to `guard(v0, .., v_{dim-1})`. Atomic subformulas
/// outside quantifiers are left alone.
pub fn guard_translate(phi: &Formula, guard: &str, dim: usize) -> Result<Formula> {
    if phi.signature()?.contains_key(guard) {
        return invalid(format!("guard symbol {guard} already occurs in the formula"));
    }
    phi.check_dimension(dim)?;
    Ok(relativize(phi, &Formula::atom(guard, (0..dim).collect())))
}

fn relativize(phi: &Formula, g: &Formula) -> Formula {
    let r = |f: &Formula| relativize(f, g);
    match phi {
        Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => phi.clone(),
        Formula::Not(a) => Formula::negate(r(a)),
        Formula::And(a, b) => Formula::and(r(a), r(b)),
        Formula::Or(a, b) => Formula::or(r(a), r(b)),
        Formula::Implies(a, b) => Formula::implies(r(a), r(b)),
        Formula::Iff(a, b) => Formula::iff(r(a), r(b)),
        Formula::Exists(v, a) => Formula::exists(*v, Formula::and(g.clone(), r(a))),
        Formula::Forall(v, a) => Formula::forall(*v, Formula::implies(g.clone(), r(a))),
    }
}

/// Expands `model` by `guard`, interpreted as the admissible set.
pub fn expand_with_guard(model: &FiniteModel, admissible: &BTreeSet<Vec<usize>>, guard: &str) -> Result<FiniteModel> {
    if model.relations.contains_key(guard) {
        return invalid(format!("guard symbol {guard} is already interpreted"));
    }
    let Some(first) = admissible.first() else {
        return invalid("the admissible set is empty, so no assignment can satisfy the precondition");
    };
    model.clone().with_relation(guard, first.len(), admissible.iter().cloned())
}
