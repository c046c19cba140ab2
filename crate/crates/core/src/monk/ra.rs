use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A relation-algebra atom structure given by forbidden triples. `(a, b, c)` is consistent,
/// meaning `c <= a;b`, exactly when it is not forbidden.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaAtomStructure {
    names: Vec<String>,
    identity: BTreeSet<usize>,
    converse: Vec<usize>,
    forbidden: BTreeSet<[usize; 3]>,
}

/// The Peircean transforms of `(a, b, c)`, including the triple itself.
pub fn peircean_orbit(converse: &[usize], t: [usize; 3]) -> Vec<[usize; 3]> {
    let mut orbit = vec![t];
    let mut i = 0;
    while i < orbit.len() {
        let [a, b, c] = orbit[i];
        for next in [[converse[a], c, b], [c, converse[b], a], [converse[b], converse[a], converse[c]]] {
            if !orbit.contains(&next) {
                orbit.push(next);
            }
        }
        i += 1;
    }
    orbit
}

impl RaAtomStructure {
    /// Rejects structures whose converse is not an involution or whose forbidden set is not
    /// closed under Peircean transforms.
    pub fn new(names: Vec<String>, identity: BTreeSet<usize>, converse: Vec<usize>, forbidden: BTreeSet<[usize; 3]>) -> Result<Self> {
        let s = Self::new_unchecked(names, identity, converse, forbidden)?;
        if let Some(a) = (0..s.atom_count()).find(|&a| s.converse[s.converse[a]] != a) {
            return invalid(format!("converse is not involutive at {}", s.names[a]));
        }
        if let Some(t) = s.forbidden.iter().find(|&&t| peircean_orbit(&s.converse, t).iter().any(|u| !s.forbidden.contains(u))) {
            return Err(Error::NotClosed(format!("forbidden triple {} is not closed under Peircean transforms", s.triple_name(*t))));
        }
        Ok(s)
    }

    /// Closes `generators` under Peircean transforms first. The closure is the only repair performed.
    pub fn from_forbidden_generators(
        names: Vec<String>,
        identity: BTreeSet<usize>,
        converse: Vec<usize>,
        generators: impl IntoIterator<Item = [usize; 3]>,
    ) -> Result<Self> {
        if converse.iter().any(|&c| c >= converse.len()) {
            return invalid("converse out of range");
        }
        let forbidden = generators.into_iter().flat_map(|t| peircean_orbit(&converse, t)).collect();
        Self::new(names, identity, converse, forbidden)
    }

    /// Only checks index ranges; used to build deliberately broken structures.
    pub fn new_unchecked(names: Vec<String>, identity: BTreeSet<usize>, converse: Vec<usize>, forbidden: BTreeSet<[usize; 3]>) -> Result<Self> {
        let k = names.len();
        if converse.len() != k || converse.iter().any(|&c| c >= k) {
            return invalid("converse must map atoms to atoms");
        }
        if identity.iter().any(|&e| e >= k) || forbidden.iter().flatten().any(|&x| x >= k) {
            return invalid("atom index out of range");
        }
        Ok(RaAtomStructure { names, identity, converse, forbidden })
    }

    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn atom(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn identity(&self) -> &BTreeSet<usize> {
        &self.identity
    }

    pub fn is_identity(&self, a: usize) -> bool {
        self.identity.contains(&a)
    }

    pub fn converse(&self, a: usize) -> usize {
        self.converse[a]
    }

    pub fn forbidden(&self) -> &BTreeSet<[usize; 3]> {
        &self.forbidden
    }

    pub fn consistent(&self, a: usize, b: usize, c: usize) -> bool {
        !self.forbidden.contains(&[a, b, c])
    }

    pub fn triple_name(&self, t: [usize; 3]) -> String {
        format!("({}, {}, {})", self.names[t[0]], self.names[t[1]], self.names[t[2]])
    }

    pub fn forbidden_names(&self) -> BTreeSet<[String; 3]> {
        self.forbidden.iter().map(|t| t.map(|x| self.names[x].clone())).collect()
    }

    pub fn to_json(&self) -> RaJson {
        RaJson {
            atoms: self.names.clone(),
            identity: self.identity.iter().map(|&e| self.names[e].clone()).collect(),
            converse: (0..self.atom_count()).map(|a| (self.names[a].clone(), self.names[self.converse[a]].clone())).collect(),
            forbidden: self.forbidden_names().into_iter().collect(),
        }
    }

    pub fn from_json(json: &RaJson) -> Result<Self> {
        let index: BTreeMap<&str, usize> = json.atoms.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let lookup = |name: &str| index.get(name).copied().ok_or_else(|| Error::InvalidArgument(format!("unknown atom {name:?}")));
        let identity = json.identity.iter().map(|n| lookup(n)).collect::<Result<_>>()?;
        let mut converse = (0..json.atoms.len()).collect::<Vec<_>>();
        for (a, b) in &json.converse {
            converse[lookup(a)?] = lookup(b)?;
        }
        let forbidden = json.forbidden.iter().map(|[a, b, c]| Ok([lookup(a)?, lookup(b)?, lookup(c)?])).collect::<Result<_>>()?;
        Self::new(json.atoms.clone(), identity, converse, forbidden)
    }
}

/// `{"atoms": [...], "identity": [...], "converse": {...}, "forbidden": [[a, b, c], ...]}` by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaJson {
    pub atoms: Vec<String>,
    pub identity: Vec<String>,
    pub converse: BTreeMap<String, String>,
    pub forbidden: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaCondition {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaReport {
    pub conditions: Vec<RaCondition>,
}

impl RaReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn condition(&self, name: &str) -> Option<&RaCondition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// Atom-level relation-algebra conditions: converse involution, nonempty identity, the
/// identity law, Peircean closure, and associativity of composition on atoms.
pub fn check_ra_atom_structure(r: &RaAtomStructure) -> RaReport {
    let k = r.atom_count();
    let mut conditions = Vec::new();
    let mut push = |name, witness: Option<String>| conditions.push(RaCondition { name, passed: witness.is_none(), witness });

    push(
        "converse-involution",
        (0..k)
            .find(|&a| r.converse(r.converse(a)) != a)
            .map(|a| format!("{} -> {} -> {}", r.names[a], r.names[r.converse(a)], r.names[r.converse(r.converse(a))])),
    );
    push("identity-nonempty", r.identity.is_empty().then(|| "no identity atom".to_string()));

    // 1';a = a and a;1' = a on atoms: some identity atom composes a into a, none into b != a.
    let identity_failure = (0..k).find_map(|a| {
        (0..k).find_map(|b| {
            let left = r.identity.iter().any(|&e| r.consistent(e, a, b));
            let right = r.identity.iter().any(|&e| r.consistent(a, e, b));
            let expected = a == b;
            (left != expected || right != expected).then(|| format!("atoms {} and {}", r.names[a], r.names[b]))
        })
    });
    push("identity-law", identity_failure);

    push(
        "peircean-closure",
        r.forbidden.iter().find_map(|&t| {
            peircean_orbit(&r.converse, t)
                .into_iter()
                .find(|u| !r.forbidden.contains(u))
                .map(|u| format!("{} forbidden but {} allowed", r.triple_name(t), r.triple_name(u)))
        }),
    );

    // (a;b);c and a;(b;c) have the same atoms below them.
    let compose = |a: usize, b: usize| -> Vec<usize> { (0..k).filter(|&x| r.consistent(a, b, x)).collect() };
    let table: Vec<Vec<Vec<usize>>> = (0..k).map(|a| (0..k).map(|b| compose(a, b)).collect()).collect();
    let assoc = (0..k).find_map(|a| {
        (0..k).find_map(|b| {
            (0..k).find_map(|c| {
                let mut left = vec![false; k];
                for &x in &table[a][b] {
                    for &d in &table[x][c] {
                        left[d] = true;
                    }
                }
                let mut right = vec![false; k];
                for &y in &table[b][c] {
                    for &d in &table[a][y] {
                        right[d] = true;
                    }
                }
                (left != right).then(|| format!("({0};{1});{2} differs from {0};({1};{2})", r.names[a], r.names[b], r.names[c]))
            })
        })
    });
    push("associativity", assoc);
    RaReport { conditions }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn orbit_of_symmetric_triple_is_all_permutations() {
        let conv = vec![0, 1, 2];
        let orbit: BTreeSet<[usize; 3]> = peircean_orbit(&conv, [0, 1, 2]).into_iter().collect();
        assert_eq!(orbit.len(), 6);
    }

    #[test]
    fn unclosed_sets_are_rejected() {
        let forbidden = BTreeSet::from([[0, 1, 1]]);
        assert!(matches!(RaAtomStructure::new(names(&["Id", "a"]), BTreeSet::from([0]), vec![0, 1], forbidden), Err(Error::NotClosed(_))));
    }

    #[test]
    fn broken_converse_is_reported() {
        let r = RaAtomStructure::new_unchecked(names(&["Id", "a", "b"]), BTreeSet::from([0]), vec![0, 2, 2], BTreeSet::new()).unwrap();
        let report = check_ra_atom_structure(&r);
        let c = report.condition("converse-involution").unwrap();
        assert!(!c.passed);
        assert!(c.witness.as_ref().unwrap().contains('a'));
    }

    #[test]
    fn json_round_trip() {
        let r = RaAtomStructure::from_forbidden_generators(names(&["Id", "a"]), BTreeSet::from([0]), vec![0, 1], [[0, 0, 1]]).unwrap();
        let text = serde_json::to_string(&r.to_json()).unwrap();
        let back: RaJson = serde_json::from_str(&text).unwrap();
        assert_eq!(RaAtomStructure::from_json(&back).unwrap(), r);
    }
}
