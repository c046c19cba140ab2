use super::bao::FiniteBao;
use super::structure::AtomStructure;
use crate::atomset::AtomSet;
use crate::error::{invalid, Error, Result};
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    NeatReduct { parent_dim: usize, dim: usize },
    Relativization { unit: AtomSet },
}

/// An algebra built from a parent, with the parent element corresponding to each of its atoms.
/// Nothing about the CA postulates is assumed; run the checker on `algebra`.
#[derive(Clone, Debug)]
pub struct DerivedAlgebra {
    pub algebra: FiniteBao,
    pub provenance: Provenance,
    pub embedding: Vec<AtomSet>,
}

impl DerivedAlgebra {
    /// The parent element represented by `x`.
    pub fn lift(&self, x: &AtomSet) -> AtomSet {
        let mut out = AtomSet::empty(self.embedding.first().map_or(0, AtomSet::universe));
        for a in x.iter() {
            out.union_with(&self.embedding[a]);
        }
        out
    }
}

/// Elements of `parent` fixed by every `c_i` with `dim <= i`, with operations for indices below `dim`.
pub fn neat_reduct(parent: &FiniteBao, dim: usize) -> Result<DerivedAlgebra> {
    let m = parent.dim();
    if dim >= m {
        return invalid(format!("neat reduct dimension {dim} must be below {m}"));
    }
    if dim == 0 {
        return invalid("neat reduct dimension must be at least 1");
    }
    let s = parent.structure();
    let k = parent.atom_count();
    // The fixed points are exactly the unions of connected components of the extra
    // accessibility relations, provided those relations are symmetric and each component
    // is itself fixed.
    for i in dim..m {
        for a in 0..k {
            if let Some(b) = s.row(i, a).iter().find(|&b| !s.related(i, b, a)) {
                return Err(Error::NotClosed(format!("T_{i} is not symmetric at atoms ({a},{b})")));
            }
        }
    }
    let mut block_of = vec![usize::MAX; k];
    let mut blocks: Vec<AtomSet> = Vec::new();
    for start in 0..k {
        if block_of[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut block = AtomSet::empty(k);
        let mut stack = vec![start];
        block_of[start] = id;
        while let Some(a) = stack.pop() {
            block.insert(a);
            for i in dim..m {
                for b in s.row(i, a).iter() {
                    if block_of[b] == usize::MAX {
                        block_of[b] = id;
                        stack.push(b);
                    }
                }
            }
        }
        blocks.push(block);
    }
    for (id, block) in blocks.iter().enumerate() {
        for i in dim..m {
            if &parent.cyl(i, block) != block {
                return Err(Error::NotClosed(format!("block {id} is not fixed by c_{i}")));
            }
        }
    }
    let union_of_blocks = |x: &AtomSet| -> Option<AtomSet> {
        let ids = AtomSet::from_atoms(blocks.len(), x.iter().map(|a| block_of[a]));
        let covered = ids.iter().fold(AtomSet::empty(k), |acc, b| acc.union(&blocks[b]));
        (&covered == x).then_some(ids)
    };
    let b = blocks.len();
    let mut columns = vec![vec![AtomSet::empty(b); b]; dim];
    for i in 0..dim {
        for (id, block) in blocks.iter().enumerate() {
            columns[i][id] =
                union_of_blocks(&parent.cyl(i, block)).ok_or_else(|| Error::NotClosed(format!("c_{i} of block {id} is not a union of blocks")))?;
        }
    }
    let mut diagonals = Vec::new();
    for j in 0..dim {
        for i in 0..j {
            diagonals.push(union_of_blocks(&parent.diag(i, j)).ok_or_else(|| Error::NotClosed(format!("d_{i}{j} is not a union of blocks")))?);
        }
    }
    let structure = AtomStructure::from_columns(dim, b, columns, diagonals);
    Ok(DerivedAlgebra { algebra: FiniteBao::new(Arc::new(structure)), provenance: Provenance::NeatReduct { parent_dim: m, dim }, embedding: blocks })
}

/// The algebra of elements below `unit`, each operation followed by meeting with `unit`.
pub fn relativize(parent: &FiniteBao, unit: &AtomSet) -> Result<DerivedAlgebra> {
    if unit.is_empty() {
        return invalid("cannot relativize to the zero element");
    }
    let s = parent.structure();
    let atoms: Vec<usize> = unit.iter().collect();
    let mut index = vec![usize::MAX; parent.atom_count()];
    for (new, &old) in atoms.iter().enumerate() {
        index[old] = new;
    }
    let k = atoms.len();
    let restrict = |x: &AtomSet| AtomSet::from_atoms(k, x.iter().filter(|&a| unit.contains(a)).map(|a| index[a]));
    let columns = (0..s.dim()).map(|i| atoms.iter().map(|&b| restrict(s.column(i, b))).collect()).collect();
    let diagonals = (0..s.dim()).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| restrict(&s.diagonal(i, j))).collect();
    let mut structure = AtomStructure::from_columns(s.dim(), k, columns, diagonals);
    if let Some(names) = s.names() {
        structure = structure.with_names(atoms.iter().map(|&a| names[a].clone()).collect())?;
    }
    Ok(DerivedAlgebra {
        algebra: FiniteBao::new(Arc::new(structure)),
        provenance: Provenance::Relativization { unit: unit.clone() },
        embedding: atoms.iter().map(|&a| parent.atom(a)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bao::complex_algebra;
    use crate::algebra::iso::are_isomorphic;
    use rand::SeedableRng;

    #[test]
    fn relativize_to_one_is_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let a = complex_algebra(AtomStructure::random(&mut rng, 3, 5, 0.3));
        let r = relativize(&a, &a.one()).unwrap();
        assert_eq!(r.algebra.structure(), a.structure());
        assert!(are_isomorphic(r.algebra.structure(), a.structure()));
        assert!(relativize(&a, &a.zero()).is_err());
    }

    #[test]
    fn relativized_operations_meet_the_unit() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let a = complex_algebra(AtomStructure::random(&mut rng, 2, 6, 0.3));
            let unit = AtomSet::from_mask(6, rand::Rng::gen_range(&mut rng, 1..64));
            let r = relativize(&a, &unit).unwrap();
            assert_eq!(r.algebra.atom_count(), unit.count());
            for x in r.algebra.elements().unwrap() {
                for i in 0..2 {
                    let expected = a.cyl(i, &r.lift(&x)).intersection(&unit);
                    assert_eq!(r.lift(&r.algebra.cyl(i, &x)), expected);
                }
            }
        }
    }

    #[test]
    fn neat_reduct_dimension_checks() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let a = complex_algebra(AtomStructure::random(&mut rng, 2, 3, 0.3));
        assert!(matches!(neat_reduct(&a, 2), Err(Error::InvalidArgument(_))));
    }
}
