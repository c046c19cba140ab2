use super::structure::AtomStructure;
use crate::atomset::AtomSet;
use std::collections::HashMap;
use std::sync::Arc;

/// Atoms sharing the same `T_i` column: `c_i` only needs one union per group.
#[derive(Debug)]
pub(crate) struct ColumnGroups {
    pub group_of: Vec<usize>,
    pub members: Vec<AtomSet>,
    pub image: Vec<AtomSet>,
}

impl ColumnGroups {
    fn build(structure: &AtomStructure, i: usize) -> Self {
        let k = structure.atom_count();
        let mut index: HashMap<&AtomSet, usize> = HashMap::new();
        let mut group_of = Vec::with_capacity(k);
        let mut members: Vec<AtomSet> = Vec::new();
        let mut image = Vec::new();
        for b in 0..k {
            let col = structure.column(i, b);
            let g = *index.entry(col).or_insert_with(|| {
                members.push(AtomSet::empty(k));
                image.push(col.clone());
                image.len() - 1
            });
            members[g].insert(b);
            group_of.push(g);
        }
        ColumnGroups { group_of, members, image }
    }
}

#[derive(Debug)]
struct Inner {
    structure: Arc<AtomStructure>,
    groups: Vec<ColumnGroups>,
}

/// The complex algebra of an atom structure: all subsets of atoms with `c_i` and `d_ij`
/// induced by the accessibility relations. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct FiniteBao(Arc<Inner>);

pub fn complex_algebra(structure: AtomStructure) -> FiniteBao {
    FiniteBao::new(Arc::new(structure))
}

/// Reads the atom structure back off the operators: `a T_i b` iff `a <= c_i {b}`.
pub fn atom_structure_of(algebra: &FiniteBao) -> AtomStructure {
    let k = algebra.atom_count();
    let n = algebra.dim();
    let columns = (0..n).map(|i| (0..k).map(|b| algebra.cyl(i, &algebra.atom(b))).collect()).collect();
    let diagonals = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| algebra.diag(i, j)).collect();
    let out = AtomStructure::from_columns(n, k, columns, diagonals);
    match algebra.structure().names() {
        Some(names) => out.with_names(names.to_vec()).expect("name count matches"),
        None => out,
    }
}

impl FiniteBao {
    pub fn new(structure: Arc<AtomStructure>) -> Self {
        let groups = (0..structure.dim()).map(|i| ColumnGroups::build(&structure, i)).collect();
        FiniteBao(Arc::new(Inner { structure, groups }))
    }

    pub fn structure(&self) -> &AtomStructure {
        &self.0.structure
    }

    pub fn shared_structure(&self) -> Arc<AtomStructure> {
        Arc::clone(&self.0.structure)
    }

    pub(crate) fn groups(&self, i: usize) -> &ColumnGroups {
        &self.0.groups[i]
    }

    pub fn same_algebra(&self, other: &FiniteBao) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.structure() == other.structure()
    }

    pub fn dim(&self) -> usize {
        self.structure().dim()
    }

    pub fn atom_count(&self) -> usize {
        self.structure().atom_count()
    }

    pub fn zero(&self) -> AtomSet {
        AtomSet::empty(self.atom_count())
    }

    pub fn one(&self) -> AtomSet {
        AtomSet::full(self.atom_count())
    }

    pub fn atom(&self, a: usize) -> AtomSet {
        AtomSet::singleton(self.atom_count(), a)
    }

    pub fn diag(&self, i: usize, j: usize) -> AtomSet {
        self.structure().diagonal(i, j)
    }

    /// `c_i x`.
    pub fn cyl(&self, i: usize, x: &AtomSet) -> AtomSet {
        let groups = &self.0.groups[i];
        let mut out = self.zero();
        if x.count() * 4 < groups.members.len() {
            let mut done = vec![false; groups.members.len()];
            for b in x.iter() {
                let g = groups.group_of[b];
                if !std::mem::replace(&mut done[g], true) {
                    out.union_with(&groups.image[g]);
                }
            }
        } else {
            for (members, image) in groups.members.iter().zip(&groups.image) {
                if members.intersects(x) {
                    out.union_with(image);
                }
            }
        }
        out
    }

    /// Applies `c_{i_1}` first, then `c_{i_2}`, and so on.
    pub fn cyl_seq(&self, indices: &[usize], x: &AtomSet) -> AtomSet {
        indices.iter().fold(x.clone(), |acc, &i| self.cyl(i, &acc))
    }

    pub fn atoms_of<'a>(&self, x: &'a AtomSet) -> impl Iterator<Item = usize> + 'a {
        x.iter()
    }

    /// All elements, for algebras with at most 20 atoms.
    pub fn elements(&self) -> Option<impl Iterator<Item = AtomSet> + '_> {
        let k = self.atom_count();
        (k <= 20).then(|| (0u64..1 << k).map(move |mask| AtomSet::from_mask(k, mask)))
    }
}
