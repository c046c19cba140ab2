use super::formula::Formula;
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite structure on `0..universe`, optionally with a set of admissible assignments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteModel {
    pub universe: usize,
    pub relations: BTreeMap<String, Relation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible: Option<BTreeSet<Vec<usize>>>,
}

impl FiniteModel {
    pub fn new(universe: usize) -> Result<Self> {
        if universe == 0 {
            return invalid("a model needs a non-empty universe");
        }
        Ok(FiniteModel { universe, relations: BTreeMap::new(), admissible: None })
    }

    pub fn with_relation<I: IntoIterator<Item = Vec<usize>>>(mut self, name: impl Into<String>, arity: usize, tuples: I) -> Result<Self> {
        let tuples: BTreeSet<Vec<usize>> = tuples.into_iter().collect();
        let name = name.into();
        if let Some(t) = tuples.iter().find(|t| t.len() != arity || t.iter().any(|&x| x >= self.universe)) {
            return invalid(format!("tuple {t:?} does not fit relation {name} of arity {arity}"));
        }
        self.relations.insert(name, Relation { arity, tuples });
        Ok(self)
    }

    pub fn with_admissible<I: IntoIterator<Item = Vec<usize>>>(mut self, assignments: I) -> Result<Self> {
        let set: BTreeSet<Vec<usize>> = assignments.into_iter().collect();
        check_assignments(self.universe, &set)?;
        self.admissible = Some(set);
        Ok(self)
    }

    pub fn holds(&self, rel: &str, tuple: &[usize]) -> bool {
        self.relations.get(rel).is_some_and(|r| r.tuples.contains(tuple))
    }

    /// Re-checks every invariant; used after deserializing.
    pub fn validate(&self) -> Result<()> {
        if self.universe == 0 {
            return invalid("a model needs a non-empty universe");
        }
        for (name, r) in &self.relations {
            if let Some(t) = r.tuples.iter().find(|t| t.len() != r.arity || t.iter().any(|&x| x >= self.universe)) {
                return invalid(format!("tuple {t:?} does not fit relation {name}"));
            }
        }
        if let Some(v) = &self.admissible {
            check_assignments(self.universe, v)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: FiniteModel = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("model JSON: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    /// Arity agreement and known symbols for `phi` evaluated with `dim` variables.
    pub fn check_formula(&self, phi: &Formula, dim: usize) -> Result<()> {
        phi.check_dimension(dim)?;
        for (rel, arity) in phi.signature()? {
            match self.relations.get(&rel) {
                None => return invalid(format!("relation {rel} is not interpreted")),
                Some(r) if r.arity != arity => return invalid(format!("relation {rel} has arity {} but is used with {arity} arguments", r.arity)),
                Some(_) => {}
            }
        }
        Ok(())
    }

    fn check_assignment(&self, s: &[usize], phi: &Formula) -> Result<()> {
        if let Some(&x) = s.iter().find(|&&x| x >= self.universe) {
            return invalid(format!("assignment value {x} outside the universe"));
        }
        self.check_formula(phi, s.len())
    }
}

fn check_assignments(universe: usize, set: &BTreeSet<Vec<usize>>) -> Result<()> {
    let dim = set.first().map_or(0, Vec::len);
    match set.iter().find(|t| t.len() != dim || t.iter().any(|&x| x >= universe)) {
        Some(t) => invalid(format!("assignment {t:?} does not fit the universe and dimension")),
        None => Ok(()),
    }
}

/// Where quantified variables may range.
#[derive(Clone, Copy)]
pub(crate) enum Scope<'a> {
    /// All of `^dim U`.
    Square,
    /// Only assignments in the given set.
    Within(&'a BTreeSet<Vec<usize>>),
}

pub(crate) fn evaluate(model: &FiniteModel, scope: Scope<'_>, s: &mut Vec<usize>, phi: &Formula) -> bool {
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom { rel, vars } => {
            let tuple: Vec<usize> = vars.iter().map(|&v| s[v]).collect();
            model.holds(rel, &tuple)
        }
        Formula::Eq(a, b) => s[*a] == s[*b],
        Formula::Not(a) => !evaluate(model, scope, s, a),
        Formula::And(a, b) => evaluate(model, scope, s, a) && evaluate(model, scope, s, b),
        Formula::Or(a, b) => evaluate(model, scope, s, a) || evaluate(model, scope, s, b),
        Formula::Implies(a, b) => !evaluate(model, scope, s, a) || evaluate(model, scope, s, b),
        Formula::Iff(a, b) => evaluate(model, scope, s, a) == evaluate(model, scope, s, b),
        Formula::Exists(v, body) => variants(model, scope, s, *v, body, true),
        Formula::Forall(v, body) => !variants(model, scope, s, *v, body, false),
    }
}

/// Whether some admissible `v`-variant of `s` makes `body` equal to `want`.
fn variants(model: &FiniteModel, scope: Scope<'_>, s: &mut Vec<usize>, v: usize, body: &Formula, want: bool) -> bool {
    let saved = s[v];
    let mut found = false;
    for x in 0..model.universe {
        s[v] = x;
        let allowed = match scope {
            Scope::Square => true,
            Scope::Within(set) => set.contains(s.as_slice()),
        };
        if allowed && evaluate(model, scope, s, body) == want {
            found = true;
            break;
        }
    }
    s[v] = saved;
    found
}

/// Tarskian truth of `phi` at the assignment `s`, whose length is the number of variables.
pub fn eval(model: &FiniteModel, s: &[usize], phi: &Formula) -> Result<bool> {
    model.check_assignment(s, phi)?;
    Ok(evaluate(model, Scope::Square, &mut s.to_vec(), phi))
}

/// Truth in the generalized model `(M, V)`: quantifiers only reach assignments in `V`.
pub fn eval_generalized(model: &FiniteModel, admissible: &BTreeSet<Vec<usize>>, s: &[usize], phi: &Formula) -> Result<bool> {
    model.check_assignment(s, phi)?;
    if !admissible.contains(s) {
        return Err(Error::Precondition(format!("assignment {s:?} is not admissible")));
    }
    Ok(evaluate(model, Scope::Within(admissible), &mut s.to_vec(), phi))
}
