use super::formula::Formula;
use super::model::{evaluate, FiniteModel, Scope};
use super::random::all_tuples;
use crate::algebra::FiniteBao;
use crate::atomset::AtomSet;
use crate::error::{invalid, Error, Result};
use crate::set_algebra::SetAlgebra;
use fixedbitset::FixedBitSet;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Relation symbol interpreted as the unit of the algebra.
pub const UNIT_SYMBOL: &str = "1";

/// An interpretation of each atom of a finite algebra as a set of `dim`-tuples; elements are
/// interpreted as the union over their atoms.
#[derive(Clone, Debug)]
pub struct AlgebraModel {
    algebra: FiniteBao,
    universe: usize,
    atoms: Vec<BTreeSet<Vec<usize>>>,
}

impl AlgebraModel {
    pub fn new(algebra: &FiniteBao, universe: usize, atoms: Vec<BTreeSet<Vec<usize>>>) -> Result<Self> {
        if atoms.len() != algebra.atom_count() {
            return invalid(format!("{} atom interpretations for {} atoms", atoms.len(), algebra.atom_count()));
        }
        let n = algebra.dim();
        if let Some(t) = atoms.iter().flatten().find(|t| t.len() != n || t.iter().any(|&x| x >= universe)) {
            return invalid(format!("tuple {t:?} does not fit universe {universe} and dimension {n}"));
        }
        Ok(AlgebraModel { algebra: algebra.clone(), universe, atoms })
    }

    /// The set algebra's own unit on its base: each atom is one sequence.
    pub fn from_set_algebra(set_algebra: &SetAlgebra) -> Self {
        let algebra = &set_algebra.algebra;
        let atoms = (0..algebra.atom_count()).map(|a| set_algebra.sequences_of(&algebra.atom(a)).into_iter().collect()).collect();
        AlgebraModel { algebra: algebra.clone(), universe: set_algebra.space.base(), atoms }
    }

    pub fn algebra(&self) -> &FiniteBao {
        &self.algebra
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn atom_relation(&self, atom: usize) -> &BTreeSet<Vec<usize>> {
        &self.atoms[atom]
    }

    pub fn relation(&self, x: &AtomSet) -> BTreeSet<Vec<usize>> {
        x.iter().flat_map(|a| self.atoms[a].iter().cloned()).collect()
    }

    /// A first-order model with one relation per named element, plus the unit.
    pub fn finite_model(&self, symbols: &BTreeMap<String, AtomSet>) -> Result<FiniteModel> {
        let n = self.algebra.dim();
        let mut model = FiniteModel::new(self.universe)?;
        for (name, x) in symbols {
            model = model.with_relation(name.clone(), n, self.relation(x))?;
        }
        if !model.relations.contains_key(UNIT_SYMBOL) {
            model = model.with_relation(UNIT_SYMBOL, n, self.relation(&self.algebra.one()))?;
        }
        Ok(model)
    }

    /// Atoms that hold of each tuple of the unit.
    fn labels(&self) -> HashMap<Vec<usize>, Vec<usize>> {
        let mut out: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (a, rel) in self.atoms.iter().enumerate() {
            for t in rel {
                out.entry(t.clone()).or_default().push(a);
            }
        }
        out
    }
}

/// `C^n(M)`: the `m`-tuples whose range is an `n`-clique, a set all of whose `n`-tuples
/// satisfy the unit.
pub fn clique_set(model: &FiniteModel, n: usize, m: usize) -> Result<BTreeSet<Vec<usize>>> {
    let unit = match model.relations.get(UNIT_SYMBOL) {
        Some(r) if r.arity == n => r,
        _ => return invalid(format!("the model needs an {n}-ary unit relation {UNIT_SYMBOL:?}")),
    };
    let mut memo: HashMap<Vec<usize>, bool> = HashMap::new();
    let mut out = BTreeSet::new();
    for s in all_tuples(model.universe, m) {
        let mut range = s.clone();
        range.sort_unstable();
        range.dedup();
        let is_clique = *memo
            .entry(range.clone())
            .or_insert_with(|| all_tuples(range.len(), n).iter().all(|t| unit.tuples.contains(&t.iter().map(|&k| range[k]).collect::<Vec<_>>())));
        if is_clique {
            out.insert(s);
        }
    }
    Ok(out)
}

/// Truth under clique guarded semantics: `exists v_i` ranges over `i`-variants in `C^n(M)`.
pub fn clique_guarded_eval(model: &FiniteModel, s: &[usize], phi: &Formula, n: usize) -> Result<bool> {
    model.check_formula(phi, s.len())?;
    if let Some(&x) = s.iter().find(|&&x| x >= model.universe) {
        return invalid(format!("assignment value {x} outside the universe"));
    }
    let cliques = clique_set(model, n, s.len())?;
    if !phi.is_quantifier_free() && !cliques.contains(s) {
        return Err(Error::Precondition(format!("{s:?} is not in the clique set")));
    }
    Ok(evaluate(model, Scope::Within(&cliques), &mut s.to_vec(), phi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareFailure {
    /// The clique tuple `s`.
    pub assignment: Vec<usize>,
    /// The cylindrified coordinate `i < n`.
    pub index: usize,
    /// The injection `l: n -> m`.
    pub map: Vec<usize>,
    pub atom: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub square: bool,
    pub cliques: usize,
    pub failure: Option<SquareFailure>,
}

fn injections(n: usize, m: usize) -> Vec<Vec<usize>> {
    all_tuples(m, n).into_iter().filter(|l| l.iter().collect::<BTreeSet<_>>().len() == n).collect()
}

fn unit_model(model: &AlgebraModel) -> Result<FiniteModel> {
    model.finite_model(&BTreeMap::new())
}

/// Whether every `c_i a` holding of `s o l` for a clique tuple `s` has a witness `t` in
/// the clique set that agrees with `s` off coordinate `l(i)`. Checking atoms suffices because
/// elements are interpreted additively.
pub fn is_m_square_model(model: &AlgebraModel, m: usize) -> Result<SquareReport> {
    let n = model.algebra.dim();
    if m < n {
        return invalid(format!("m = {m} is below the dimension {n}"));
    }
    let cliques = clique_set(&unit_model(model)?, n, m)?;
    let labels = model.labels();
    let s_ = model.algebra.structure();
    let maps = injections(n, m);
    for s in &cliques {
        for l in &maps {
            let x: Vec<usize> = l.iter().map(|&k| s[k]).collect();
            for &b in labels.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                for i in 0..n {
                    for a in s_.row(i, b).iter() {
                        let mut t = s.clone();
                        let witnessed = (0..model.universe).any(|y| {
                            t[l[i]] = y;
                            cliques.contains(&t) && model.atoms[a].contains(&l.iter().map(|&k| t[k]).collect::<Vec<_>>())
                        });
                        if !witnessed {
                            let failure = SquareFailure { assignment: s.clone(), index: i, map: l.clone(), atom: a };
                            return Ok(SquareReport { square: false, cliques: cliques.len(), failure: Some(failure) });
                        }
                    }
                }
            }
        }
    }
    Ok(SquareReport { square: true, cliques: cliques.len(), failure: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatFailure {
    /// The assignments defined by a formula on which the two orders disagree.
    pub defined_set: Vec<Vec<usize>>,
    pub first: usize,
    pub second: usize,
    /// A clique tuple where `exists v_first exists v_second` and the swapped order differ.
    pub assignment: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatReport {
    pub square: SquareReport,
    /// Quantifier depth of the formulas checked; the verdict covers exactly those.
    pub depth: usize,
    /// Atoms of the Boolean algebra of subsets of the clique set definable at that depth.
    pub definable_atoms: usize,
    pub flat: bool,
    pub failure: Option<FlatFailure>,
}

struct CliqueSpace {
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    universe: usize,
}

impl CliqueSpace {
    fn set(&self, pred: impl Fn(&[usize]) -> bool) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.tuples.len());
        for (k, t) in self.tuples.iter().enumerate() {
            out.set(k, pred(t));
        }
        out
    }

    /// `{s in C : some i-variant of s lies in x}`.
    fn exists(&self, i: usize, x: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.tuples.len());
        for k in x.ones() {
            let mut t = self.tuples[k].clone();
            for y in 0..self.universe {
                t[i] = y;
                if let Some(&j) = self.index.get(&t) {
                    out.insert(j);
                }
            }
        }
        out
    }
}

/// Splits each class of `class` by membership in `x`; returns whether anything split.
fn refine(class: &mut [usize], x: &FixedBitSet) -> bool {
    let before = class.iter().collect::<BTreeSet<_>>().len();
    let mut ids: HashMap<(usize, bool), usize> = HashMap::new();
    for (k, c) in class.iter_mut().enumerate() {
        let next = ids.len();
        *c = *ids.entry((*c, x.contains(k))).or_insert(next);
    }
    ids.len() > before
}

fn blocks(class: &[usize]) -> Vec<FixedBitSet> {
    let count = class.iter().max().map_or(0, |&c| c + 1);
    let mut out = vec![FixedBitSet::with_capacity(class.len()); count];
    for (k, &c) in class.iter().enumerate() {
        out[c].insert(k);
    }
    out
}

/// `m`-square plus commutation of `exists v_i exists v_j` for every formula of quantifier
/// depth at most `depth` over the atoms. Quantifiers distribute over unions, so checking the
/// atoms of the definable Boolean algebra covers every such formula.
pub fn is_m_flat_model(model: &AlgebraModel, m: usize, depth: usize) -> Result<FlatReport> {
    let square = is_m_square_model(model, m)?;
    let n = model.algebra.dim();
    let tuples: Vec<Vec<usize>> = clique_set(&unit_model(model)?, n, m)?.into_iter().collect();
    let index = tuples.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
    let space = CliqueSpace { tuples, index, universe: model.universe };
    let mut class = vec![0; space.tuples.len()];
    for a in 0..model.algebra.atom_count() {
        for l in all_tuples(m, n) {
            let x = space.set(|s| model.atoms[a].contains(&l.iter().map(|&k| s[k]).collect::<Vec<_>>()));
            refine(&mut class, &x);
        }
    }
    for j in 0..m {
        for i in 0..j {
            refine(&mut class, &space.set(|s| s[i] == s[j]));
        }
    }
    for _ in 0..depth {
        let mut changed = false;
        for p in blocks(&class) {
            for i in 0..m {
                changed |= refine(&mut class, &space.exists(i, &p));
            }
        }
        if !changed {
            break;
        }
    }
    let atoms = blocks(&class);
    let mut failure = None;
    'search: for p in &atoms {
        for j in 0..m {
            for i in 0..j {
                let ij = space.exists(i, &space.exists(j, p));
                let ji = space.exists(j, &space.exists(i, p));
                if let Some(k) = ij.symmetric_difference(&ji).next() {
                    failure = Some(FlatFailure {
                        defined_set: p.ones().map(|k| space.tuples[k].clone()).collect(),
                        first: i,
                        second: j,
                        assignment: space.tuples[k].clone(),
                    });
                    break 'search;
                }
            }
        }
    }
    let flat = square.square && failure.is_none();
    Ok(FlatReport { square, depth, definable_atoms: atoms.len(), flat, failure })
}
