use crate::atomset::AtomSet;
use crate::error::{invalid, Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Index of the unordered pair `{i, j}` (`i < j`) in a flat triangle layout.
pub(crate) fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// An `n`-dimensional atom structure: accessibility relations `T_i` and unary diagonals `D_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomStructure {
    dim: usize,
    atom_count: usize,
    /// `columns[i][b] = { a : a T_i b }`, the cylindrification of the atom `b`.
    columns: Vec<Vec<AtomSet>>,
    /// `rows[i][a] = { b : a T_i b }`.
    rows: Vec<Vec<AtomSet>>,
    diagonals: Vec<AtomSet>,
    names: Option<Vec<String>>,
}

impl AtomStructure {
    /// Builds a structure from explicit `T_i` pairs `(a, b)` and the `D_ij` sets for `i < j`.
    /// Missing diagonals are taken to be empty.
    pub fn new(dim: usize, atom_count: usize, relations: &[Vec<(usize, usize)>], diagonals: &BTreeMap<(usize, usize), Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be at least 1");
        }
        if relations.len() != dim {
            return invalid(format!("expected {dim} accessibility relations, got {}", relations.len()));
        }
        let mut columns = vec![vec![AtomSet::empty(atom_count); atom_count]; dim];
        for (i, pairs) in relations.iter().enumerate() {
            for &(a, b) in pairs {
                if a >= atom_count || b >= atom_count {
                    return invalid(format!("T_{i} pair ({a},{b}) out of range"));
                }
                columns[i][b].insert(a);
            }
        }
        let mut diag = vec![AtomSet::empty(atom_count); dim * dim.saturating_sub(1) / 2];
        for (&(i, j), atoms) in diagonals {
            if i >= j || j >= dim {
                return invalid(format!("diagonal key ({i},{j}) must satisfy i < j < {dim}"));
            }
            for &a in atoms {
                if a >= atom_count {
                    return invalid(format!("D_{i}{j} atom {a} out of range"));
                }
                diag[pair_index(i, j)].insert(a);
            }
        }
        Ok(Self::from_columns(dim, atom_count, columns, diag))
    }

    /// `columns[i][b]` lists the atoms `a` with `a T_i b`; `diagonals` is in pair-index order.
    pub(crate) fn from_columns(dim: usize, atom_count: usize, columns: Vec<Vec<AtomSet>>, diagonals: Vec<AtomSet>) -> Self {
        let mut rows = vec![vec![AtomSet::empty(atom_count); atom_count]; dim];
        for i in 0..dim {
            for b in 0..atom_count {
                for a in columns[i][b].iter() {
                    rows[i][a].insert(b);
                }
            }
        }
        AtomStructure { dim, atom_count, columns, rows, diagonals, names: None }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.atom_count {
            return invalid(format!("{} names for {} atoms", names.len(), self.atom_count));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn atom_name(&self, atom: usize) -> String {
        self.names.as_ref().map_or_else(|| atom.to_string(), |n| n[atom].clone())
    }

    /// `a T_i b`.
    pub fn related(&self, i: usize, a: usize, b: usize) -> bool {
        self.columns[i][b].contains(a)
    }

    pub fn column(&self, i: usize, b: usize) -> &AtomSet {
        &self.columns[i][b]
    }

    pub fn row(&self, i: usize, a: usize) -> &AtomSet {
        &self.rows[i][a]
    }

    /// `D_ij`; the full set when `i == j`.
    pub fn diagonal(&self, i: usize, j: usize) -> AtomSet {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => AtomSet::full(self.atom_count),
            std::cmp::Ordering::Less => self.diagonals[pair_index(i, j)].clone(),
            std::cmp::Ordering::Greater => self.diagonals[pair_index(j, i)].clone(),
        }
    }

    pub fn in_diagonal(&self, atom: usize, i: usize, j: usize) -> bool {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => true,
            std::cmp::Ordering::Less => self.diagonals[pair_index(i, j)].contains(atom),
            std::cmp::Ordering::Greater => self.diagonals[pair_index(j, i)].contains(atom),
        }
    }

    pub fn relation_pairs(&self, i: usize) -> Vec<(usize, usize)> {
        (0..self.atom_count).flat_map(|a| self.rows[i][a].iter().map(move |b| (a, b))).collect()
    }

    /// Relabels atoms: atom `a` becomes `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let k = self.atom_count;
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return invalid("relabelling is not a permutation of the atoms");
        }
        let relations: Vec<Vec<(usize, usize)>> =
            (0..self.dim).map(|i| self.relation_pairs(i).into_iter().map(|(a, b)| (perm[a], perm[b])).collect()).collect();
        let diagonals = self.diagonal_map().into_iter().map(|(key, atoms)| (key, atoms.iter().map(|&a| perm[a]).collect())).collect();
        let mut out = AtomStructure::new(self.dim, k, &relations, &diagonals)?;
        if let Some(names) = &self.names {
            let mut renamed = vec![String::new(); k];
            for (a, name) in names.iter().enumerate() {
                renamed[perm[a]] = name.clone();
            }
            out.names = Some(renamed);
        }
        Ok(out)
    }

    pub fn diagonal_map(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut map = BTreeMap::new();
        for j in 0..self.dim {
            for i in 0..j {
                map.insert((i, j), self.diagonals[pair_index(i, j)].to_vec());
            }
        }
        map
    }

    pub fn to_json(&self) -> AtomStructureJson {
        AtomStructureJson {
            schema: Some(ATOM_STRUCTURE_SCHEMA.to_string()),
            dim: self.dim,
            atoms: self.atom_count,
            relations: (0..self.dim).map(|i| self.relation_pairs(i).into_iter().map(|(a, b)| [a, b]).collect()).collect(),
            diagonals: self.diagonal_map().into_iter().map(|((i, j), atoms)| (format!("{i},{j}"), atoms)).collect(),
            names: self.names.clone(),
        }
    }

    pub fn from_json(json: &AtomStructureJson) -> Result<Self> {
        let relations: Vec<Vec<(usize, usize)>> = json.relations.iter().map(|pairs| pairs.iter().map(|p| (p[0], p[1])).collect()).collect();
        let mut diagonals = BTreeMap::new();
        for (key, atoms) in &json.diagonals {
            let parsed = key
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse::<usize>().ok()?, j.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| Error::InvalidArgument(format!("bad diagonal key {key:?}")))?;
            diagonals.insert(parsed, atoms.clone());
        }
        let structure = AtomStructure::new(json.dim, json.atoms, &relations, &diagonals)?;
        match &json.names {
            Some(names) => structure.with_names(names.clone()),
            None => Ok(structure),
        }
    }

    /// A random structure with every `T_i` reflexive, each further pair present with
    /// probability `density`, and each diagonal membership a coin flip.
    pub fn random<R: Rng>(rng: &mut R, dim: usize, atom_count: usize, density: f64) -> Self {
        let relations: Vec<Vec<(usize, usize)>> = (0..dim)
            .map(|_| {
                let mut pairs = Vec::new();
                for a in 0..atom_count {
                    for b in 0..atom_count {
                        if a == b || rng.gen_bool(density) {
                            pairs.push((a, b));
                        }
                    }
                }
                pairs
            })
            .collect();
        let mut diagonals = BTreeMap::new();
        for j in 0..dim {
            for i in 0..j {
                diagonals.insert((i, j), (0..atom_count).filter(|_| rng.gen_bool(0.5)).collect());
            }
        }
        AtomStructure::new(dim, atom_count, &relations, &diagonals).expect("generated structure is well formed")
    }
}

pub const ATOM_STRUCTURE_SCHEMA: &str = "cylalg.atom-structure/1";

/// Serialized atom structure: `{"dim": n, "atoms": k, "T": [[[a, b], ...], ...], "D": {"i,j": [...]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomStructureJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub dim: usize,
    pub atoms: usize,
    #[serde(rename = "T")]
    pub relations: Vec<Vec<[usize; 2]>>,
    #[serde(rename = "D")]
    pub diagonals: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}
