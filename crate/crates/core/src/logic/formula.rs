//! First-order formulas over variables `v0, v1, ...`.
//!
//! Text grammar, one formula per s-expression:
//!
//! ```text
//! formula := true | false
//!          | (= vI vJ)
//!          | (not F) | (and F F ...) | (or F F ...) | (-> F F) | (<-> F F)
//!          | (exists vI F) | (forall vI F)
//!          | (NAME vI ...)          ; any other head is a relation symbol
//! ```
//!
//! `and`/`or` with more than two operands nest to the right.

use super::sexpr::{parse_error, read, Sexp};
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    True,
    False,
    Atom { rel: String, vars: Vec<usize> },
    Eq(usize, usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(usize, Box<Formula>),
    Forall(usize, Box<Formula>),
}

const KEYWORDS: [&str; 10] = ["true", "false", "=", "not", "and", "or", "->", "<->", "exists", "forall"];

impl Formula {
    pub fn atom(rel: impl Into<String>, vars: Vec<usize>) -> Self {
        Formula::Atom { rel: rel.into(), vars }
    }

    pub fn negate(f: Formula) -> Self {
        Formula::Not(Box::new(f))
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

    pub fn exists(var: usize, body: Formula) -> Self {
        Formula::Exists(var, Box::new(body))
    }

    pub fn forall(var: usize, body: Formula) -> Self {
        Formula::Forall(var, Box::new(body))
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => vec![],
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
        }
    }

    /// Height of the syntax tree; atomic formulas have depth 0.
    pub fn depth(&self) -> usize {
        self.children().into_iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn quantifier_depth(&self) -> usize {
        let inner = self.children().into_iter().map(Formula::quantifier_depth).max().unwrap_or(0);
        match self {
            Formula::Exists(..) | Formula::Forall(..) => inner + 1,
            _ => inner,
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.quantifier_depth() == 0
    }

    /// Every variable index mentioned, bound or free.
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Atom { vars, .. } => out.extend(vars.iter().copied()),
            Formula::Eq(a, b) => out.extend([*a, *b]),
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(*v);
            }
            _ => {}
        });
        out
    }

    pub fn free_variables(&self) -> BTreeSet<usize> {
        match self {
            Formula::True | Formula::False => BTreeSet::new(),
            Formula::Atom { vars, .. } => vars.iter().copied().collect(),
            Formula::Eq(a, b) => [*a, *b].into(),
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let mut free = body.free_variables();
                free.remove(v);
                free
            }
            _ => self.children().into_iter().flat_map(Formula::free_variables).collect(),
        }
    }

    /// Relation symbols with their arities; a symbol used at two arities is an error.
    pub fn signature(&self) -> Result<BTreeMap<String, usize>> {
        let mut out: BTreeMap<String, usize> = BTreeMap::new();
        let mut clash = None;
        self.walk(&mut |f| {
            if let Formula::Atom { rel, vars } = f {
                match out.get(rel) {
                    Some(&k) if k != vars.len() => clash = Some(rel.clone()),
                    _ => {
                        out.insert(rel.clone(), vars.len());
                    }
                }
            }
        });
        match clash {
            Some(rel) => invalid(format!("relation {rel} is used with two arities")),
            None => Ok(out),
        }
    }

    /// Fails when a variable index reaches `dim`.
    pub fn check_dimension(&self, dim: usize) -> Result<()> {
        match self.variables().last() {
            Some(&v) if v >= dim => invalid(format!("variable v{v} outside dimension {dim}")),
            _ => Ok(()),
        }
    }

    /// Atomic formulas whose variables are not `v0, v1, ..` in their natural order.
    pub fn unrestricted_atoms(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Atom { vars, .. } = f {
                if vars.iter().enumerate().any(|(k, &v)| k != v) {
                    out.push(f.clone());
                }
            }
        });
        out
    }

    fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom { rel, vars } => {
                write!(f, "({rel}")?;
                for v in vars {
                    write!(f, " v{v}")?;
                }
                f.write_str(")")
            }
            Formula::Eq(a, b) => write!(f, "(= v{a} v{b})"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Implies(a, b) => write!(f, "(-> {a} {b})"),
            Formula::Iff(a, b) => write!(f, "(<-> {a} {b})"),
            Formula::Exists(v, a) => write!(f, "(exists v{v} {a})"),
            Formula::Forall(v, a) => write!(f, "(forall v{v} {a})"),
        }
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        from_sexp(&read(s)?)
    }
}

fn variable(e: &Sexp) -> Result<usize> {
    match e {
        Sexp::Token { text, offset } => match text.strip_prefix('v').and_then(|d| d.parse().ok()) {
            Some(v) => Ok(v),
            None => parse_error(*offset, format!("expected a variable like v0, found {text:?}")),
        },
        Sexp::List { offset, .. } => parse_error(*offset, "expected a variable, found a list"),
    }
}

fn from_sexp(e: &Sexp) -> Result<Formula> {
    let (items, offset) = match e {
        Sexp::Token { text, offset } => {
            return match text.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                _ => parse_error(*offset, format!("unexpected token {text:?}")),
            }
        }
        Sexp::List { items, offset } => (items, *offset),
    };
    let Some(Sexp::Token { text: head, .. }) = items.first() else {
        return parse_error(offset, "a formula list must start with an operator or relation name");
    };
    let args = &items[1..];
    let arity = |k: usize| if args.len() == k { Ok(()) } else { parse_error(offset, format!("{head} takes {k} operands")) };
    let sub = |k: usize| from_sexp(&args[k]);
    match head.as_str() {
        "=" => {
            arity(2)?;
            Ok(Formula::Eq(variable(&args[0])?, variable(&args[1])?))
        }
        "not" => {
            arity(1)?;
            Ok(Formula::negate(sub(0)?))
        }
        "and" | "or" => {
            let parts = args.iter().map(from_sexp).collect::<Result<Vec<_>>>()?;
            let unit = if head == "and" { Formula::True } else { Formula::False };
            let join = if head == "and" { Formula::and } else { Formula::or };
            Ok(parts.into_iter().rev().reduce(|acc, f| join(f, acc)).unwrap_or(unit))
        }
        "->" => {
            arity(2)?;
            Ok(Formula::implies(sub(0)?, sub(1)?))
        }
        "<->" => {
            arity(2)?;
            Ok(Formula::iff(sub(0)?, sub(1)?))
        }
        "exists" | "forall" => {
            arity(2)?;
            let v = variable(&args[0])?;
            let body = sub(1)?;
            Ok(if head == "exists" { Formula::exists(v, body) } else { Formula::forall(v, body) })
        }
        rel if KEYWORDS.contains(&rel) => parse_error(offset, format!("{rel} cannot head a formula list")),
        rel => Ok(Formula::atom(rel, args.iter().map(variable).collect::<Result<_>>()?)),
    }
}
