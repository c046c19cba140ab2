//! The seven cylindric-algebra postulates, checked on atoms where additivity
//! allows and optionally by exhaustive enumeration of small algebras.

use super::bao::FiniteBao;
use crate::atomset::AtomSet;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [Axiom::C1, Axiom::C2, Axiom::C3, Axiom::C4, Axiom::C5, Axiom::C6, Axiom::C7];

    pub fn law(self) -> &'static str {
        match self {
            Axiom::C1 => "c_i 0 = 0",
            Axiom::C2 => "x <= c_i x",
            Axiom::C3 => "c_i(x . c_i y) = c_i x . c_i y",
            Axiom::C4 => "c_i c_j x = c_j c_i x",
            Axiom::C5 => "d_ii = 1",
            Axiom::C6 => "d_jk = c_i(d_ji . d_ik) for i not in {j, k}",
            Axiom::C7 => "c_i(d_ij . x) . c_i(d_ij . -x) = 0 for i != j",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    /// Atom-level reductions, sound for every algebra size.
    Atoms,
    /// Atom-level reductions plus enumeration of every element (or pair) of the algebra.
    Exhaustive,
}

/// Failing instance: the indices and elements substituted into the law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomWitness {
    pub indices: Vec<usize>,
    pub elements: Vec<AtomSet>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    pub law: &'static str,
    pub passed: bool,
    pub reduction: &'static str,
    pub witness: Option<AxiomWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub dim: usize,
    pub atom_count: usize,
    pub mode: CheckMode,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn result(&self, axiom: Axiom) -> &AxiomResult {
        self.results.iter().find(|r| r.axiom == axiom).expect("every axiom is reported")
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

/// Largest atom count for which [`CheckMode::Exhaustive`] enumerates elements.
pub const EXHAUSTIVE_ATOM_LIMIT: usize = 12;

pub fn check_ca_axioms(algebra: &FiniteBao) -> AxiomReport {
    check_ca_axioms_with(algebra, CheckMode::Atoms)
}

pub fn check_ca_axioms_with(algebra: &FiniteBao, mode: CheckMode) -> AxiomReport {
    let mode = if algebra.atom_count() > EXHAUSTIVE_ATOM_LIMIT { CheckMode::Atoms } else { mode };
    let checks: [(Axiom, &'static str, fn(&FiniteBao) -> Option<AxiomWitness>); 7] = [
        (Axiom::C1, "direct: c_i applied to the empty set", c1),
        (Axiom::C2, "atoms: both sides additive, so a <= c_i{a} for every atom a", c2),
        (Axiom::C3, "atom pairs: both sides additive in x and in y; pairs grouped by equal i-columns", c3),
        (Axiom::C4, "atoms: both sides additive; c_i c_j computed once per j-column group", c4),
        (Axiom::C5, "direct on constants", c5),
        (Axiom::C6, "direct on constants, all i, j, k with i not in {j, k}", c6),
        (Axiom::C7, "atoms: holds iff distinct atoms of d_ij have disjoint i-columns", c7),
    ];
    let results = checks
        .into_iter()
        .map(|(axiom, reduction, check)| {
            let mut witness = check(algebra);
            if witness.is_none() && mode == CheckMode::Exhaustive {
                witness = exhaustive(algebra, axiom);
            }
            AxiomResult { axiom, law: axiom.law(), passed: witness.is_none(), reduction, witness }
        })
        .collect();
    AxiomReport { dim: algebra.dim(), atom_count: algebra.atom_count(), mode, results }
}

fn witness(indices: Vec<usize>, elements: Vec<AtomSet>, detail: String) -> Option<AxiomWitness> {
    Some(AxiomWitness { indices, elements, detail })
}

fn c1(a: &FiniteBao) -> Option<AxiomWitness> {
    (0..a.dim()).find(|&i| !a.cyl(i, &a.zero()).is_empty()).and_then(|i| witness(vec![i], vec![], format!("c_{i} 0 is nonzero")))
}

fn c2(a: &FiniteBao) -> Option<AxiomWitness> {
    let s = a.structure();
    for i in 0..a.dim() {
        if let Some(atom) = (0..a.atom_count()).find(|&b| !s.related(i, b, b)) {
            return witness(vec![i], vec![a.atom(atom)], format!("atom {} is not below c_{i} of itself", s.atom_name(atom)));
        }
    }
    None
}

fn c3(a: &FiniteBao) -> Option<AxiomWitness> {
    for i in 0..a.dim() {
        let groups = a.groups(i);
        for (gx, members_x) in groups.members.iter().enumerate() {
            let col_x = &groups.image[gx];
            for (gy, members_y) in groups.members.iter().enumerate() {
                let col_y = &groups.image[gy];
                let inside = members_x.intersection(col_y);
                let outside = members_x.difference(col_y);
                let bad = if let Some(x) = inside.first().filter(|_| !col_x.is_subset(col_y)) {
                    Some(x)
                } else {
                    outside.first().filter(|_| col_x.intersects(col_y))
                };
                if let Some(x) = bad {
                    let y = members_y.first().expect("groups are nonempty");
                    return witness(vec![i], vec![a.atom(x), a.atom(y)], format!("x = atom {x}, y = atom {y}"));
                }
            }
        }
    }
    None
}

fn c4(a: &FiniteBao) -> Option<AxiomWitness> {
    let n = a.dim();
    for j in 0..n {
        for i in 0..j {
            let via_j: Vec<AtomSet> = a.groups(j).image.iter().map(|col| a.cyl(i, col)).collect();
            let via_i: Vec<AtomSet> = a.groups(i).image.iter().map(|col| a.cyl(j, col)).collect();
            for atom in 0..a.atom_count() {
                if via_j[a.groups(j).group_of[atom]] != via_i[a.groups(i).group_of[atom]] {
                    return witness(vec![i, j], vec![a.atom(atom)], format!("c_{i} c_{j} and c_{j} c_{i} differ on atom {atom}"));
                }
            }
        }
    }
    None
}

fn c5(a: &FiniteBao) -> Option<AxiomWitness> {
    (0..a.dim()).find(|&i| !a.diag(i, i).is_full()).and_then(|i| witness(vec![i], vec![], format!("d_{i}{i} is not 1")))
}

fn c6(a: &FiniteBao) -> Option<AxiomWitness> {
    let n = a.dim();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for k in (0..n).filter(|&k| k != i) {
                let rhs = a.cyl(i, &a.diag(j, i).intersection(&a.diag(i, k)));
                if rhs != a.diag(j, k) {
                    return witness(vec![i, j, k], vec![], format!("d_{j}{k} differs from c_{i}(d_{j}{i} . d_{i}{k})"));
                }
            }
        }
    }
    None
}

fn c7(a: &FiniteBao) -> Option<AxiomWitness> {
    let n = a.dim();
    let s = a.structure();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let d = a.diag(i, j);
            let members: Vec<usize> = d.iter().collect();
            for (p, &x) in members.iter().enumerate() {
                for &y in &members[p + 1..] {
                    if s.column(i, x).intersects(s.column(i, y)) {
                        return witness(vec![i, j], vec![a.atom(x)], format!("atoms {x} and {y} of d_{i}{j} share an i-column point"));
                    }
                }
            }
        }
    }
    None
}

/// Evaluates one instance of `axiom` directly with the algebra operations.
pub fn law_holds(a: &FiniteBao, axiom: Axiom, indices: &[usize], elements: &[AtomSet]) -> bool {
    match (axiom, indices, elements) {
        (Axiom::C1, [i], []) => a.cyl(*i, &a.zero()).is_empty(),
        (Axiom::C2, [i], [x]) => x.is_subset(&a.cyl(*i, x)),
        (Axiom::C3, [i], [x, y]) => a.cyl(*i, &x.intersection(&a.cyl(*i, y))) == a.cyl(*i, x).intersection(&a.cyl(*i, y)),
        (Axiom::C4, [i, j], [x]) => a.cyl(*i, &a.cyl(*j, x)) == a.cyl(*j, &a.cyl(*i, x)),
        (Axiom::C5, [i], []) => a.diag(*i, *i).is_full(),
        (Axiom::C6, [i, j, k], []) => a.diag(*j, *k) == a.cyl(*i, &a.diag(*j, *i).intersection(&a.diag(*i, *k))),
        (Axiom::C7, [i, j], [x]) => {
            let d = a.diag(*i, *j);
            a.cyl(*i, &d.intersection(x)).intersection(&a.cyl(*i, &d.intersection(&x.complement()))).is_empty()
        }
        _ => true,
    }
}

impl AxiomWitness {
    /// True when substituting the witness into the law really falsifies it.
    pub fn confirms(&self, algebra: &FiniteBao, axiom: Axiom) -> bool {
        let arity_ok = matches!(
            (axiom, self.indices.len(), self.elements.len()),
            (Axiom::C1 | Axiom::C5, 1, 0) | (Axiom::C2, 1, 1) | (Axiom::C3, 1, 2) | (Axiom::C4, 2, 1) | (Axiom::C6, 3, 0) | (Axiom::C7, 2, 1)
        );
        let valid_indices = match axiom {
            Axiom::C4 | Axiom::C7 => self.indices[0] != self.indices[1],
            Axiom::C6 => self.indices[0] != self.indices[1] && self.indices[0] != self.indices[2],
            _ => true,
        };
        arity_ok && valid_indices && self.indices.iter().all(|&i| i < algebra.dim()) && !law_holds(algebra, axiom, &self.indices, &self.elements)
    }
}

fn exhaustive(a: &FiniteBao, axiom: Axiom) -> Option<AxiomWitness> {
    let n = a.dim();
    let elements: Vec<AtomSet> = a.elements()?.collect();
    let index_tuples: Vec<Vec<usize>> = match axiom {
        Axiom::C1 | Axiom::C2 | Axiom::C3 | Axiom::C5 => (0..n).map(|i| vec![i]).collect(),
        Axiom::C4 | Axiom::C7 => (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| vec![i, j])).collect(),
        Axiom::C6 => {
            (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| vec![i, j, k]))).filter(|t| t[0] != t[1] && t[0] != t[2]).collect()
        }
    };
    for idx in &index_tuples {
        let mut instances: Box<dyn Iterator<Item = Vec<AtomSet>>> = match axiom {
            Axiom::C1 | Axiom::C5 | Axiom::C6 => Box::new(std::iter::once(vec![])),
            Axiom::C3 => Box::new(elements.iter().flat_map(|x| elements.iter().map(move |y| vec![x.clone(), y.clone()]))),
            _ => Box::new(elements.iter().map(|x| vec![x.clone()])),
        };
        if let Some(els) = instances.find(|els| !law_holds(a, axiom, idx, els)) {
            return witness(idx.clone(), els, "found by exhaustive enumeration".into());
        }
    }
    None
}
