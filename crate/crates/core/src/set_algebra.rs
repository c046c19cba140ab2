//! Cylindric set algebras over finite bases, full or relativized to a unit `V`.

use crate::algebra::{AtomStructure, FiniteBao};
use crate::atomset::AtomSet;
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// A unit `V` of `dim`-sequences over `0..base`, sequences encoded as base-`base` integers
/// with coordinate 0 least significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetAlgebraSpace {
    base: usize,
    dim: usize,
    unit: Vec<u64>,
}

pub fn full_space(base: usize, dim: usize) -> Result<SetAlgebraSpace> {
    if base == 0 || dim == 0 {
        return invalid("base and dimension must be at least 1");
    }
    let total = (base as u64).checked_pow(dim as u32).filter(|&t| t <= 1 << 24);
    let Some(total) = total else { return invalid(format!("^{dim}{base} is too large")) };
    Ok(SetAlgebraSpace { base, dim, unit: (0..total).collect() })
}

/// A unit that is a union of squares `^dim U_k` over the given base subsets.
pub fn union_of_squares(base: usize, dim: usize, bases: &[Vec<usize>]) -> Result<SetAlgebraSpace> {
    let full = full_space(base, dim)?;
    let unit = full.unit.iter().copied().filter(|&c| {
        let s = full.decode(c);
        bases.iter().any(|b| s.iter().all(|v| b.contains(v)))
    });
    SetAlgebraSpace::from_codes(base, dim, unit)
}

impl SetAlgebraSpace {
    pub fn from_sequences<I: IntoIterator<Item = Vec<usize>>>(base: usize, dim: usize, sequences: I) -> Result<Self> {
        let mut codes = Vec::new();
        for s in sequences {
            if s.len() != dim || s.iter().any(|&v| v >= base) {
                return invalid(format!("sequence {s:?} is not in ^{dim}{base}"));
            }
            codes.push(encode(base, &s));
        }
        Self::from_codes(base, dim, codes)
    }

    pub fn from_codes<I: IntoIterator<Item = u64>>(base: usize, dim: usize, codes: I) -> Result<Self> {
        if base == 0 || dim == 0 {
            return invalid("base and dimension must be at least 1");
        }
        let limit = (base as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
        let unit: BTreeSet<u64> = codes.into_iter().collect();
        if unit.is_empty() {
            return invalid("the unit must be nonempty");
        }
        if let Some(bad) = unit.iter().find(|&&c| c >= limit) {
            return invalid(format!("code {bad} out of range"));
        }
        Ok(SetAlgebraSpace { base, dim, unit: unit.into_iter().collect() })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.unit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unit.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.unit
    }

    pub fn sequences(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.unit.iter().map(|&c| self.decode(c))
    }

    pub fn decode(&self, code: u64) -> Vec<usize> {
        let mut c = code;
        (0..self.dim)
            .map(|_| {
                let v = (c % self.base as u64) as usize;
                c /= self.base as u64;
                v
            })
            .collect()
    }

    pub fn encode(&self, seq: &[usize]) -> u64 {
        encode(self.base, seq)
    }

    /// Position of a sequence in the unit, which is also its atom index.
    pub fn index_of(&self, seq: &[usize]) -> Option<usize> {
        self.unit.binary_search(&self.encode(seq)).ok()
    }

    pub fn contains(&self, seq: &[usize]) -> bool {
        self.index_of(seq).is_some()
    }

    pub fn is_full(&self) -> bool {
        self.unit.len() as u64 == (self.base as u64).pow(self.dim as u32)
    }

    pub fn to_json(&self) -> SetSpaceJson {
        SetSpaceJson { base: self.base, dim: self.dim, unit: self.unit.clone() }
    }

    pub fn from_json(json: &SetSpaceJson) -> Result<Self> {
        Self::from_codes(json.base, json.dim, json.unit.iter().copied())
    }
}

fn encode(base: usize, seq: &[usize]) -> u64 {
    seq.iter().rev().fold(0u64, |acc, &v| acc * base as u64 + v as u64)
}

/// `{"base": u, "dim": n, "unit": [code, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSpaceJson {
    pub base: usize,
    pub dim: usize,
    pub unit: Vec<u64>,
}

/// The set algebra on a space: atoms are the singletons `{s}`, `s` in `V`, indexed by position in `V`.
#[derive(Clone, Debug)]
pub struct SetAlgebra {
    pub space: SetAlgebraSpace,
    pub algebra: FiniteBao,
}

pub fn ops_on(space: &SetAlgebraSpace) -> SetAlgebra {
    let n = space.dim;
    let k = space.len();
    let seqs: Vec<Vec<usize>> = space.sequences().collect();
    // Group sequences by their values off coordinate i: those are the i-columns.
    let mut columns = vec![vec![AtomSet::empty(k); k]; n];
    for (i, column) in columns.iter_mut().enumerate() {
        let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (a, s) in seqs.iter().enumerate() {
            let mut key = s.clone();
            key[i] = usize::MAX;
            classes.entry(key).or_default().push(a);
        }
        for members in classes.values() {
            let set = AtomSet::from_atoms(k, members.iter().copied());
            for &b in members {
                column[b] = set.clone();
            }
        }
    }
    let diagonals =
        (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| AtomSet::from_atoms(k, (0..k).filter(|&a| seqs[a][i] == seqs[a][j]))).collect();
    let names = seqs.iter().map(|s| format!("{s:?}")).collect();
    let structure = AtomStructure::from_columns(n, k, columns, diagonals).with_names(names).expect("one name per atom");
    SetAlgebra { space: space.clone(), algebra: FiniteBao::new(Arc::new(structure)) }
}

impl SetAlgebra {
    pub fn element<I: IntoIterator<Item = Vec<usize>>>(&self, sequences: I) -> Result<AtomSet> {
        let mut out = self.algebra.zero();
        for s in sequences {
            match self.space.index_of(&s) {
                Some(a) if s.len() == self.space.dim && s.iter().all(|&v| v < self.space.base) => out.insert(a),
                _ => return invalid(format!("sequence {s:?} is not in the unit")),
            }
        }
        Ok(out)
    }

    pub fn sequences_of(&self, x: &AtomSet) -> Vec<Vec<usize>> {
        x.iter().map(|a| self.space.decode(self.space.unit[a])).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitClosure {
    /// `s in V` implies `s o [i|j] in V` for all `i, j`.
    Diagonalizable,
    /// `s in V` implies `s o t in V` for every map `t: n -> n`.
    LocallySquare,
}

pub fn unit_closure_kind(space: &SetAlgebraSpace) -> BTreeSet<UnitClosure> {
    let n = space.dim;
    let mut out = BTreeSet::new();
    let replacements = (0..n).flat_map(|i| (0..n).map(move |j| Substitution::Replacement(i, j).as_map(n))).collect::<Vec<_>>();
    if closed_under(space, &replacements) {
        out.insert(UnitClosure::Diagonalizable);
    }
    let all_maps: Vec<Vec<usize>> = (0..n.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = code % n;
                    code /= n;
                    v
                })
                .collect()
        })
        .collect();
    if closed_under(space, &all_maps) {
        out.insert(UnitClosure::LocallySquare);
    }
    out
}

fn closed_under(space: &SetAlgebraSpace, maps: &[Vec<usize>]) -> bool {
    space.sequences().all(|s| maps.iter().all(|m| space.contains(&compose(&s, m))))
}

/// `(s o t)_k = s_{t(k)}`.
pub fn compose(s: &[usize], t: &[usize]) -> Vec<usize> {
    t.iter().map(|&k| s[k]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Substitution {
    /// `[i, j]`: swaps coordinates `i` and `j`.
    Transposition(usize, usize),
    /// `[i|j]`: sends `i` to `j`, so `s o [i|j]` carries `s_j` in slot `i`.
    Replacement(usize, usize),
    /// An arbitrary map `t: n -> n`, given by its values.
    Map(Vec<usize>),
}

impl Substitution {
    pub fn as_map(&self, n: usize) -> Vec<usize> {
        match self {
            Substitution::Transposition(i, j) => (0..n)
                .map(|k| {
                    if k == *i {
                        *j
                    } else if k == *j {
                        *i
                    } else {
                        k
                    }
                })
                .collect(),
            Substitution::Replacement(i, j) => (0..n).map(|k| if k == *i { *j } else { k }).collect(),
            Substitution::Map(m) => m.clone(),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let ok = match self {
            Substitution::Transposition(i, j) | Substitution::Replacement(i, j) => *i < n && *j < n,
            Substitution::Map(m) => m.len() == n && m.iter().all(|&v| v < n),
        };
        if ok {
            Ok(())
        } else {
            invalid(format!("substitution {self:?} is not a map on {n} coordinates"))
        }
    }
}

/// `S X = {s in V : s o t in X}`; sequences with `s o t` outside `V` never qualify.
#[derive(Clone, Debug)]
pub struct SubstitutionOp {
    image: Vec<Option<usize>>,
    universe: usize,
}

pub fn substitution_op(space: &SetAlgebraSpace, kind: &Substitution) -> Result<SubstitutionOp> {
    kind.validate(space.dim)?;
    let map = kind.as_map(space.dim);
    let image = space.sequences().map(|s| space.index_of(&compose(&s, &map))).collect();
    Ok(SubstitutionOp { image, universe: space.len() })
}

impl SubstitutionOp {
    pub fn apply(&self, x: &AtomSet) -> AtomSet {
        AtomSet::from_atoms(self.universe, (0..self.universe).filter(|&a| self.image[a].is_some_and(|b| x.contains(b))))
    }
}

/// Commutation of cylindrifiers restricted below `d_ik . d_jl` with `k, l` outside `{i, j}`:
/// `c_i c_j (x . d_ik . d_jl) = c_j c_i (x . d_ik . d_jl)`. Both sides are additive in `x`,
/// so atoms suffice. Returns the first failing `(i, j, k, l, atom)`.
pub fn weak_commutativity_failure(algebra: &FiniteBao) -> Option<(usize, usize, usize, usize, usize)> {
    let n = algebra.dim();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for k in (0..n).filter(|&k| k != i && k != j) {
                for l in (0..n).filter(|&l| l != i && l != j) {
                    let guard = algebra.diag(i, k).intersection(&algebra.diag(j, l));
                    for a in guard.iter() {
                        let x = algebra.atom(a);
                        if algebra.cyl(i, &algebra.cyl(j, &x)) != algebra.cyl(j, &algebra.cyl(i, &x)) {
                            return Some((i, j, k, l, a));
                        }
                    }
                }
            }
        }
    }
    None
}

/// The stored unit on which relativized cylindrifiers fail to commute: all pairs over
/// `{0, 1, 2}` except `(0, 2)` and `(2, 0)`.
pub fn non_commuting_space() -> SetAlgebraSpace {
    SetAlgebraSpace::from_sequences(3, 2, [[0, 0], [1, 1], [2, 2], [0, 1], [1, 0], [1, 2], [2, 1]].map(|s| s.to_vec())).expect("valid unit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_ca_axioms, is_rectangle, rectangularly_dense, Axiom};
    use proptest::prelude::*;

    #[test]
    fn full_space_sizes() {
        assert_eq!(full_space(2, 2).unwrap().len(), 4);
        assert_eq!(full_space(3, 3).unwrap().len(), 27);
        let trivial = ops_on(&full_space(1, 3).unwrap());
        assert_eq!(trivial.algebra.atom_count(), 1);
        for j in 0..3 {
            for i in 0..3 {
                assert!(trivial.algebra.diag(i, j).is_full());
            }
        }
        assert!(full_space(0, 2).is_err());
    }

    #[test]
    fn cylindrifier_examples() {
        let full = ops_on(&full_space(2, 2).unwrap());
        let x = full.element([vec![0, 1]]).unwrap();
        let c0 = full.algebra.cyl(0, &x);
        assert_eq!(full.sequences_of(&c0), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(full.sequences_of(&full.algebra.diag(0, 1)), vec![vec![0, 0], vec![1, 1]]);

        let rel = ops_on(&SetAlgebraSpace::from_sequences(2, 2, [vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap());
        let x = rel.element([vec![0, 1]]).unwrap();
        assert_eq!(rel.sequences_of(&rel.algebra.cyl(0, &x)), vec![vec![0, 1]]);
    }

    #[test]
    fn closure_kinds() {
        let both = BTreeSet::from([UnitClosure::Diagonalizable, UnitClosure::LocallySquare]);
        assert_eq!(unit_closure_kind(&full_space(3, 3).unwrap()), both);
        let single = SetAlgebraSpace::from_sequences(2, 2, [vec![0, 1]]).unwrap();
        assert!(unit_closure_kind(&single).is_empty());
        // Non-injective pairs over a 2-element base: exactly the diagonal.
        let diagonal = SetAlgebraSpace::from_sequences(2, 2, [vec![0, 0], vec![1, 1]]).unwrap();
        assert!(unit_closure_kind(&diagonal).contains(&UnitClosure::Diagonalizable));
        // Closed under replacements but not under the transposition: (0,1) without (1,0).
        let space = SetAlgebraSpace::from_sequences(2, 2, [vec![0, 0], vec![1, 1], vec![0, 1]]).unwrap();
        let kinds = unit_closure_kind(&space);
        assert!(kinds.contains(&UnitClosure::Diagonalizable) && !kinds.contains(&UnitClosure::LocallySquare));
    }

    #[test]
    fn substitution_examples() {
        let space = full_space(2, 2).unwrap();
        let full = ops_on(&space);
        let swap = substitution_op(&space, &Substitution::Transposition(0, 1)).unwrap();
        let d = full.algebra.diag(0, 1);
        assert_eq!(swap.apply(&d), d);
        let x = full.element([vec![0, 1]]).unwrap();
        assert_eq!(full.sequences_of(&swap.apply(&x)), vec![vec![1, 0]]);
        let replace = substitution_op(&space, &Substitution::Replacement(0, 1)).unwrap();
        // Oracle: filter the four sequences by hand.
        let expected: Vec<Vec<usize>> = space.sequences().filter(|s| vec![s[1], s[1]] == vec![0, 1]).collect();
        assert_eq!(full.sequences_of(&replace.apply(&x)), expected);
        assert!(expected.is_empty());
        assert!(substitution_op(&space, &Substitution::Replacement(0, 2)).is_err());
    }

    #[test]
    fn relativized_commutativity_failure_is_stored() {
        let space = non_commuting_space();
        assert!(unit_closure_kind(&space).contains(&UnitClosure::LocallySquare));
        let rel = ops_on(&space);
        let report = check_ca_axioms(&rel.algebra);
        for ok in [Axiom::C1, Axiom::C2, Axiom::C3, Axiom::C5, Axiom::C7] {
            assert!(report.result(ok).passed, "{ok}");
        }
        let c4 = report.result(Axiom::C4);
        assert!(!c4.passed);
        assert!(c4.witness.as_ref().unwrap().confirms(&rel.algebra, Axiom::C4));
        // The weakened law is vacuous at dimension 2 and holds on locally square units of dimension 3.
        assert_eq!(weak_commutativity_failure(&rel.algebra), None);
        let cube = SetAlgebraSpace::from_codes(
            3,
            3,
            (0..27).filter(|&c| {
                let s = full_space(3, 3).unwrap().decode(c);
                !(s.contains(&0) && s.contains(&2))
            }),
        )
        .unwrap();
        assert!(unit_closure_kind(&cube).contains(&UnitClosure::LocallySquare));
        assert_eq!(weak_commutativity_failure(&ops_on(&cube).algebra), None);
    }

    #[test]
    fn rectangles_in_full_space() {
        let space = full_space(3, 2).unwrap();
        let full = ops_on(&space);
        for a0 in 1u64..8 {
            for a1 in 1u64..8 {
                let x = full.element(space.sequences().filter(|s| a0 >> s[0] & 1 == 1 && a1 >> s[1] & 1 == 1)).unwrap();
                assert!(is_rectangle(&full.algebra, &x));
            }
        }
        assert!(rectangularly_dense(&full.algebra));
    }

    proptest! {
        #[test]
        fn relativized_units_keep_most_axioms(base in 1usize..=3, dim in 2usize..=3, mask in any::<u32>()) {
            let total = base.pow(dim as u32) as u64;
            let codes: Vec<u64> = (0..total).filter(|&c| mask >> (c % 32) & 1 == 1).collect();
            prop_assume!(!codes.is_empty());
            let space = SetAlgebraSpace::from_codes(base, dim, codes).unwrap();
            let report = check_ca_axioms(&ops_on(&space).algebra);
            for ok in [Axiom::C1, Axiom::C2, Axiom::C3, Axiom::C5, Axiom::C7] {
                prop_assert!(report.result(ok).passed);
            }
        }

        #[test]
        fn transposition_is_boolean_automorphism(base in 1usize..=3, dim in 2usize..=3, i in 0usize..3, j in 0usize..3, m1 in any::<u32>(), m2 in any::<u32>()) {
            prop_assume!(i < dim && j < dim);
            let space = full_space(base, dim).unwrap();
            let k = space.len();
            let op = substitution_op(&space, &Substitution::Transposition(i, j)).unwrap();
            let x = AtomSet::from_atoms(k, (0..k).filter(|a| m1 >> (a % 32) & 1 == 1));
            let y = AtomSet::from_atoms(k, (0..k).filter(|a| m2 >> (a % 32) & 1 == 1));
            prop_assert_eq!(op.apply(&x.union(&y)), op.apply(&x).union(&op.apply(&y)));
            prop_assert_eq!(op.apply(&x.complement()), op.apply(&x).complement());
            prop_assert_eq!(op.apply(&op.apply(&x)), x.clone());
            // Polyadic reading on full units: s in S X iff the swapped sequence is in X.
            let set = ops_on(&space);
            let direct: Vec<Vec<usize>> = space.sequences().filter(|s| {
                let mut t = s.clone();
                t.swap(i, j);
                x.contains(space.index_of(&t).unwrap())
            }).collect();
            prop_assert_eq!(set.sequences_of(&op.apply(&x)), direct);
        }
    }
}
