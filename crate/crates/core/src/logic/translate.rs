//! Terms in the signature of relativized set algebras with substitutions, and their
//! translation into loosely guarded first-order sentences.
//!
//! ```text
//! term := NAME | 0 | 1 | (d I J) | (- T) | (+ T T) | (* T T) | (c I T) | (s (K0 .. Kn-1) T)
//! qf   := (= T T) | (not Q) | (and Q Q ..) | (or Q Q ..)
//! ```

use super::clique::{AlgebraModel, UNIT_SYMBOL};
use super::formula::Formula;
use super::model::{eval, FiniteModel};
use super::sexpr::{parse_error, read, Sexp};
use crate::atomset::AtomSet;
use crate::error::{invalid, Error, Result};
use crate::set_algebra::{substitution_op, SetAlgebra, Substitution};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

pub const ZERO_SYMBOL: &str = "0";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Var(String),
    Zero,
    One,
    Diag(usize, usize),
    Complement(Box<Term>),
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Cyl(usize, Box<Term>),
    /// `s_sigma` with `sigma` given by its values.
    Subst(Vec<usize>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QfFormula {
    Equation(Term, Term),
    Not(Box<QfFormula>),
    And(Box<QfFormula>, Box<QfFormula>),
    Or(Box<QfFormula>, Box<QfFormula>),
}

/// Relation symbol for `d_ij`; `d_ii` is the unit.
pub fn diagonal_symbol(i: usize, j: usize) -> String {
    match i.cmp(&j) {
        std::cmp::Ordering::Equal => UNIT_SYMBOL.to_string(),
        std::cmp::Ordering::Less => format!("d_{i}_{j}"),
        std::cmp::Ordering::Greater => format!("d_{j}_{i}"),
    }
}

impl Term {
    fn check(&self, n: usize) -> Result<()> {
        match self {
            Term::Var(_) | Term::Zero | Term::One => Ok(()),
            Term::Diag(i, j) if *i < n && *j < n => Ok(()),
            Term::Diag(i, j) => invalid(format!("d_{i}{j} outside dimension {n}")),
            Term::Complement(t) => t.check(n),
            Term::Join(a, b) | Term::Meet(a, b) => a.check(n).and(b.check(n)),
            Term::Cyl(i, t) if *i < n => t.check(n),
            Term::Cyl(i, _) => invalid(format!("c_{i} outside dimension {n}")),
            Term::Subst(sigma, t) if sigma.len() == n && sigma.iter().all(|&k| k < n) => t.check(n),
            Term::Subst(sigma, _) => invalid(format!("{sigma:?} is not a map on {n} coordinates")),
        }
    }

    /// Nesting depth of cylindrifications; each needs one fresh variable.
    pub fn cyl_depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero | Term::One | Term::Diag(..) => 0,
            Term::Complement(t) | Term::Subst(_, t) => t.cyl_depth(),
            Term::Join(a, b) | Term::Meet(a, b) => a.cyl_depth().max(b.cyl_depth()),
            Term::Cyl(_, t) => t.cyl_depth() + 1,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        match self {
            Term::Var(x) => [x.clone()].into(),
            Term::Zero | Term::One | Term::Diag(..) => BTreeSet::new(),
            Term::Complement(t) | Term::Cyl(_, t) | Term::Subst(_, t) => t.variables(),
            Term::Join(a, b) | Term::Meet(a, b) => a.variables().union(&b.variables()).cloned().collect(),
        }
    }
}

impl QfFormula {
    fn equations(&self) -> Vec<(&Term, &Term)> {
        match self {
            QfFormula::Equation(a, b) => vec![(a, b)],
            QfFormula::Not(q) => q.equations(),
            QfFormula::And(a, b) | QfFormula::Or(a, b) => {
                let mut out = a.equations();
                out.extend(b.equations());
                out
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.equations().into_iter().flat_map(|(a, b)| a.variables().into_iter().chain(b.variables())).collect()
    }
}

/// The value of `t` in the set algebra, variables read from `binding`.
pub fn eval_term(algebra: &SetAlgebra, binding: &BTreeMap<String, AtomSet>, t: &Term) -> Result<AtomSet> {
    let a = &algebra.algebra;
    let n = a.dim();
    t.check(n)?;
    let rec = |u: &Term| eval_term(algebra, binding, u);
    Ok(match t {
        Term::Var(x) => binding.get(x).cloned().ok_or_else(|| Error::InvalidArgument(format!("variable {x} is unbound")))?,
        Term::Zero => a.zero(),
        Term::One => a.one(),
        Term::Diag(i, j) if i == j => a.one(),
        Term::Diag(i, j) => a.diag(*i.min(j), *i.max(j)),
        Term::Complement(u) => a.one().difference(&rec(u)?),
        Term::Join(u, v) => rec(u)?.union(&rec(v)?),
        Term::Meet(u, v) => rec(u)?.intersection(&rec(v)?),
        Term::Cyl(i, u) => a.cyl(*i, &rec(u)?),
        Term::Subst(sigma, u) => substitution_op(&algebra.space, &Substitution::Map(sigma.clone()))?.apply(&rec(u)?),
    })
}

/// Truth of `q` in the set algebra.
pub fn holds(algebra: &SetAlgebra, binding: &BTreeMap<String, AtomSet>, q: &QfFormula) -> Result<bool> {
    Ok(match q {
        QfFormula::Equation(a, b) => eval_term(algebra, binding, a)? == eval_term(algebra, binding, b)?,
        QfFormula::Not(p) => !holds(algebra, binding, p)?,
        QfFormula::And(p, r) => holds(algebra, binding, p)? && holds(algebra, binding, r)?,
        QfFormula::Or(p, r) => holds(algebra, binding, p)? || holds(algebra, binding, r)?,
    })
}

/// The translation of `t` at the variable tuple `u`; `depth` counts enclosing cylindrifications
/// and fixes the fresh variable `n + depth`.
fn term_at(t: &Term, u: &[usize], n: usize, depth: usize) -> Formula {
    let unit = || Formula::atom(UNIT_SYMBOL, u.to_vec());
    match t {
        Term::Var(x) => Formula::atom(x.clone(), u.to_vec()),
        Term::Zero => Formula::atom(ZERO_SYMBOL, u.to_vec()),
        Term::One => unit(),
        Term::Diag(i, j) => Formula::atom(diagonal_symbol(*i, *j), u.to_vec()),
        Term::Complement(s) => Formula::and(unit(), Formula::negate(term_at(s, u, n, depth))),
        Term::Join(a, b) => Formula::or(term_at(a, u, n, depth), term_at(b, u, n, depth)),
        Term::Meet(a, b) => Formula::and(term_at(a, u, n, depth), term_at(b, u, n, depth)),
        Term::Cyl(i, s) => {
            let w = n + depth;
            let mut moved = u.to_vec();
            moved[*i] = w;
            let inner = Formula::and(Formula::atom(UNIT_SYMBOL, moved.clone()), term_at(s, &moved, n, depth + 1));
            Formula::and(unit(), Formula::exists(w, inner))
        }
        Term::Subst(sigma, s) => {
            let composed: Vec<usize> = sigma.iter().map(|&k| u[k]).collect();
            Formula::and(unit(), term_at(s, &composed, n, depth))
        }
    }
}

/// `tau^u(t)` for the variables `v0 .. v_{n-1}`.
pub fn translate_term(t: &Term, n: usize) -> Result<Formula> {
    t.check(n)?;
    Ok(term_at(t, &(0..n).collect::<Vec<_>>(), n, 0))
}

/// The loosely guarded sentence for `q`: each equation `t = t'` becomes
/// `forall u (1(u) -> (tau^u(t) <-> tau^u(t')))`, Boolean structure carried over.
pub fn loosely_guarded_translate(q: &QfFormula, n: usize) -> Result<Formula> {
    Ok(match q {
        QfFormula::Equation(a, b) => {
            let body = Formula::implies(Formula::atom(UNIT_SYMBOL, (0..n).collect()), Formula::iff(translate_term(a, n)?, translate_term(b, n)?));
            (0..n).rev().fold(body, |acc, v| Formula::forall(v, acc))
        }
        QfFormula::Not(p) => Formula::negate(loosely_guarded_translate(p, n)?),
        QfFormula::And(p, r) => Formula::and(loosely_guarded_translate(p, n)?, loosely_guarded_translate(r, n)?),
        QfFormula::Or(p, r) => Formula::or(loosely_guarded_translate(p, n)?, loosely_guarded_translate(r, n)?),
    })
}

/// The model in which translated sentences are read: each bound variable, `0`, `1` and every
/// diagonal become relations through `model`.
pub fn translation_model(model: &AlgebraModel, binding: &BTreeMap<String, AtomSet>) -> Result<FiniteModel> {
    let a = model.algebra();
    let n = a.dim();
    let mut symbols = binding.clone();
    for reserved in [ZERO_SYMBOL, UNIT_SYMBOL] {
        if symbols.contains_key(reserved) {
            return invalid(format!("{reserved} is reserved"));
        }
    }
    symbols.insert(ZERO_SYMBOL.into(), a.zero());
    symbols.insert(UNIT_SYMBOL.into(), a.one());
    for j in 0..n {
        for i in 0..j {
            if symbols.insert(diagonal_symbol(i, j), a.diag(i, j)).is_some() {
                return invalid(format!("{} is reserved", diagonal_symbol(i, j)));
            }
        }
    }
    model.finite_model(&symbols)
}

/// Truth of a sentence; fails if `phi` has free variables.
pub fn sentence_holds(model: &FiniteModel, phi: &Formula) -> Result<bool> {
    if !phi.free_variables().is_empty() {
        return invalid("not a sentence");
    }
    let dim = phi.variables().last().map_or(0, |&v| v + 1);
    eval(model, &vec![0; dim], phi)
}

/// Flattens a conjunction into its conjuncts.
fn conjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(a, b) => {
            let mut out = conjuncts(a);
            out.extend(conjuncts(b));
            out
        }
        _ => vec![f],
    }
}

fn atom_vars(f: &Formula) -> Option<BTreeSet<usize>> {
    match f {
        Formula::Atom { vars, .. } => Some(vars.iter().copied().collect()),
        Formula::Eq(a, b) => Some([*a, *b].into()),
        _ => None,
    }
}

/// First place where `phi` leaves the loosely guarded fragment. Quantifier blocks must read
/// `exists y (guard and body)` or `forall y (guard -> body)` with the guard a conjunction of
/// atoms covering the free variables of the body, and each bound variable sharing a conjunct
/// with every other guard variable.
pub fn loose_guard_violation(phi: &Formula) -> Option<String> {
    match phi {
        Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => None,
        Formula::Not(a) => loose_guard_violation(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            loose_guard_violation(a).or_else(|| loose_guard_violation(b))
        }
        Formula::Exists(..) | Formula::Forall(..) => {
            let existential = matches!(phi, Formula::Exists(..));
            let mut bound = BTreeSet::new();
            let mut body = phi;
            loop {
                match (body, existential) {
                    (Formula::Exists(v, b), true) | (Formula::Forall(v, b), false) => {
                        bound.insert(*v);
                        body = b;
                    }
                    _ => break,
                }
            }
            let (guard, rest) = match (body, existential) {
                (Formula::And(g, r), true) | (Formula::Implies(g, r), false) => (g.as_ref(), r.as_ref()),
                _ => return Some(format!("quantifier block without a guard: {phi}")),
            };
            let parts: Option<Vec<BTreeSet<usize>>> = conjuncts(guard).into_iter().map(atom_vars).collect();
            let Some(parts) = parts else {
                return Some(format!("guard is not a conjunction of atoms: {guard}"));
            };
            let guard_vars: BTreeSet<usize> = parts.iter().flatten().copied().collect();
            let mut needed = rest.free_variables();
            needed.extend(bound.iter().copied());
            if let Some(v) = needed.difference(&guard_vars).next() {
                return Some(format!("variable v{v} is not covered by the guard {guard}"));
            }
            for &y in &bound {
                for &z in guard_vars.iter().filter(|&&z| z != y) {
                    if !parts.iter().any(|p| p.contains(&y) && p.contains(&z)) {
                        return Some(format!("v{y} and v{z} share no guard atom in {guard}"));
                    }
                }
            }
            loose_guard_violation(rest)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Diag(i, j) => write!(f, "(d {i} {j})"),
            Term::Complement(t) => write!(f, "(- {t})"),
            Term::Join(a, b) => write!(f, "(+ {a} {b})"),
            Term::Meet(a, b) => write!(f, "(* {a} {b})"),
            Term::Cyl(i, t) => write!(f, "(c {i} {t})"),
            Term::Subst(sigma, t) => {
                let values: Vec<String> = sigma.iter().map(usize::to_string).collect();
                write!(f, "(s ({}) {t})", values.join(" "))
            }
        }
    }
}

impl fmt::Display for QfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QfFormula::Equation(a, b) => write!(f, "(= {a} {b})"),
            QfFormula::Not(q) => write!(f, "(not {q})"),
            QfFormula::And(a, b) => write!(f, "(and {a} {b})"),
            QfFormula::Or(a, b) => write!(f, "(or {a} {b})"),
        }
    }
}

fn index(e: &Sexp) -> Result<usize> {
    match e {
        Sexp::Token { text, offset } => text.parse().or_else(|_| parse_error(*offset, format!("expected an index, found {text:?}"))),
        Sexp::List { offset, .. } => parse_error(*offset, "expected an index, found a list"),
    }
}

fn term_from(e: &Sexp) -> Result<Term> {
    let (items, offset) = match e {
        Sexp::Token { text, .. } => {
            return Ok(match text.as_str() {
                "0" => Term::Zero,
                "1" => Term::One,
                _ => Term::Var(text.clone()),
            })
        }
        Sexp::List { items, offset } => (items, *offset),
    };
    let Some(Sexp::Token { text: head, .. }) = items.first() else {
        return parse_error(offset, "a term list must start with an operator");
    };
    let args = &items[1..];
    let arity = |k: usize| if args.len() == k { Ok(()) } else { parse_error(offset, format!("{head} takes {k} operands")) };
    let sub = |k: usize| term_from(&args[k]).map(Box::new);
    match head.as_str() {
        "d" => {
            arity(2)?;
            Ok(Term::Diag(index(&args[0])?, index(&args[1])?))
        }
        "-" => {
            arity(1)?;
            Ok(Term::Complement(sub(0)?))
        }
        "+" => {
            arity(2)?;
            Ok(Term::Join(sub(0)?, sub(1)?))
        }
        "*" => {
            arity(2)?;
            Ok(Term::Meet(sub(0)?, sub(1)?))
        }
        "c" => {
            arity(2)?;
            Ok(Term::Cyl(index(&args[0])?, sub(1)?))
        }
        "s" => {
            arity(2)?;
            let Sexp::List { items: values, .. } = &args[0] else {
                return parse_error(args[0].offset(), "a substitution needs a list of values");
            };
            Ok(Term::Subst(values.iter().map(index).collect::<Result<_>>()?, sub(1)?))
        }
        other => Err(Error::InvalidArgument(format!("unsupported operator {other:?}"))),
    }
}

fn qf_from(e: &Sexp) -> Result<QfFormula> {
    let Sexp::List { items, offset } = e else {
        return parse_error(e.offset(), "expected an equation or a connective");
    };
    let Some(Sexp::Token { text: head, .. }) = items.first() else {
        return parse_error(*offset, "a formula list must start with an operator");
    };
    let args = &items[1..];
    match head.as_str() {
        "=" if args.len() == 2 => Ok(QfFormula::Equation(term_from(&args[0])?, term_from(&args[1])?)),
        "not" if args.len() == 1 => Ok(QfFormula::Not(Box::new(qf_from(&args[0])?))),
        "and" | "or" if !args.is_empty() => {
            let parts = args.iter().map(qf_from).collect::<Result<Vec<_>>>()?;
            let join = |a: QfFormula, b: QfFormula| {
                if head == "and" {
                    QfFormula::And(Box::new(a), Box::new(b))
                } else {
                    QfFormula::Or(Box::new(a), Box::new(b))
                }
            };
            Ok(parts.into_iter().rev().reduce(|acc, q| join(q, acc)).expect("non-empty"))
        }
        "=" | "not" | "and" | "or" => parse_error(*offset, format!("wrong number of operands for {head}")),
        other => Err(Error::InvalidArgument(format!("unsupported connective {other:?}"))),
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        term_from(&read(s)?)
    }
}

impl FromStr for QfFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        qf_from(&read(s)?)
    }
}
