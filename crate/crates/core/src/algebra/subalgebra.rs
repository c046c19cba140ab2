use super::bao::FiniteBao;
use crate::atomset::AtomSet;
use crate::error::{invalid, Result};
use serde::Serialize;

/// A subalgebra of a finite complex algebra, stored by its atoms: a partition of the
/// parent's atoms whose unions form the carrier.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    parent: FiniteBao,
    cells: Vec<AtomSet>,
}

/// Least subalgebra containing `gens`, computed by partition refinement: refine by the
/// generators and diagonals, then by `c_i` of every cell until stable.
pub fn generated_subalgebra(parent: &FiniteBao, gens: &[AtomSet]) -> Subalgebra {
    let n = parent.dim();
    let mut cells = vec![parent.one()];
    for g in gens {
        refine(&mut cells, g);
    }
    for j in 0..n {
        for i in 0..j {
            refine(&mut cells, &parent.diag(i, j));
        }
    }
    loop {
        let before = cells.len();
        let images: Vec<AtomSet> = cells.iter().flat_map(|c| (0..n).map(move |i| parent.cyl(i, c))).collect();
        for image in &images {
            refine(&mut cells, image);
        }
        if cells.len() == before {
            break;
        }
    }
    cells.sort();
    Subalgebra { parent: parent.clone(), cells }
}

fn refine(cells: &mut Vec<AtomSet>, by: &AtomSet) {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for cell in cells.drain(..) {
        let inside = cell.intersection(by);
        if inside.is_empty() || inside == cell {
            out.push(cell);
        } else {
            out.push(cell.difference(by));
            out.push(inside);
        }
    }
    *cells = out;
}

impl Subalgebra {
    /// Validates an explicit carrier: it must contain 0, 1 and every `d_ij`, and be closed
    /// under `+`, `-` and every `c_i`.
    pub fn from_carrier(parent: &FiniteBao, carrier: &[AtomSet]) -> Result<Self> {
        use std::collections::BTreeSet;
        let set: BTreeSet<&AtomSet> = carrier.iter().collect();
        let n = parent.dim();
        let required =
            [parent.zero(), parent.one()].into_iter().chain((0..n).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| parent.diag(i, j)));
        for r in required {
            if !set.contains(&r) {
                return invalid(format!("carrier misses constant {r:?}"));
            }
        }
        for x in &set {
            if !set.contains(&x.complement()) {
                return invalid(format!("carrier not closed under complement at {x:?}"));
            }
            for i in 0..n {
                if !set.contains(&parent.cyl(i, x)) {
                    return invalid(format!("carrier not closed under c_{i} at {x:?}"));
                }
            }
            for y in &set {
                if !set.contains(&x.union(y)) {
                    return invalid(format!("carrier not closed under + at {x:?}, {y:?}"));
                }
            }
        }
        // Atoms of the carrier: minimal nonzero members.
        let mut cells: Vec<AtomSet> =
            set.iter().filter(|x| !x.is_empty() && !set.iter().any(|y| !y.is_empty() && y != *x && y.is_subset(x))).map(|x| (*x).clone()).collect();
        cells.sort();
        Ok(Subalgebra { parent: parent.clone(), cells })
    }

    pub fn parent(&self) -> &FiniteBao {
        &self.parent
    }

    pub fn atoms(&self) -> &[AtomSet] {
        &self.cells
    }

    /// Carrier size is `2^atom_count`.
    pub fn atom_count(&self) -> usize {
        self.cells.len()
    }

    pub fn contains(&self, x: &AtomSet) -> bool {
        self.cells.iter().all(|c| c.is_subset(x) || !c.intersects(x))
    }

    /// Every element of the carrier, for carriers with at most 20 atoms.
    pub fn elements(&self) -> Option<Vec<AtomSet>> {
        let k = self.cells.len();
        (k <= 20).then(|| {
            (0u64..1 << k)
                .map(|mask| {
                    let mut x = self.parent.zero();
                    for (bit, cell) in self.cells.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            x.union_with(cell);
                        }
                    }
                    x
                })
                .collect()
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubalgebraCheck {
    pub holds: bool,
    /// For denseness: a nonzero element of the parent with no nonzero subalgebra element below it.
    pub witness: Option<AtomSet>,
}

/// `A` is dense in `B` when every nonzero `b` has a nonzero `a <= b` from `A`. Every nonzero
/// `b` lies above an atom of `B`, and the only nonzero element below an atom is the atom
/// itself, so this holds exactly when every atom of `B` belongs to `A`.
pub fn is_dense_subalgebra(sub: &Subalgebra, parent: &FiniteBao) -> Result<SubalgebraCheck> {
    same_parent(sub, parent)?;
    let missing = (0..parent.atom_count()).find(|&a| !sub.contains(&parent.atom(a)));
    Ok(SubalgebraCheck { holds: missing.is_none(), witness: missing.map(|a| parent.atom(a)) })
}

/// `A` is complete in `B` when `sum^A X = 1` implies `sum^B X = 1`. In a finite subalgebra
/// every `X` is finite and its supremum in `A` is its Boolean join, which is the same in `B`;
/// the check confirms the carrier is join-closed, which is what that argument needs.
pub fn is_complete_subalgebra(sub: &Subalgebra, parent: &FiniteBao) -> Result<SubalgebraCheck> {
    same_parent(sub, parent)?;
    let mut union = parent.zero();
    for cell in sub.atoms() {
        if cell.intersects(&union) {
            return Ok(SubalgebraCheck { holds: false, witness: Some(cell.clone()) });
        }
        union.union_with(cell);
    }
    Ok(SubalgebraCheck { holds: union.is_full(), witness: (!union.is_full()).then(|| union.complement()) })
}

fn same_parent(sub: &Subalgebra, parent: &FiniteBao) -> Result<()> {
    if !sub.parent.same_algebra(parent) {
        return invalid("subalgebra belongs to a different parent algebra");
    }
    Ok(())
}

/// `x` is a rectangle when the product of its `c_i`, `i < n`, gives `x` back.
pub fn is_rectangle(algebra: &FiniteBao, x: &AtomSet) -> bool {
    let mut product = algebra.one();
    for i in 0..algebra.dim() {
        product.intersect_with(&algebra.cyl(i, x));
    }
    &product == x
}

/// Below every nonzero element there is a nonzero rectangle. Only an atom itself lies
/// nonzero below an atom, so this is equivalent to every atom being a rectangle.
pub fn rectangularly_dense(algebra: &FiniteBao) -> bool {
    (0..algebra.atom_count()).all(|a| is_rectangle(algebra, &algebra.atom(a)))
}
