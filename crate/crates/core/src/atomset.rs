//! Fixed-universe bitsets used as elements of finite complex algebras.

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};
use std::fmt;

/// A subset of `0..universe`, the universe being the atom count of the algebra it lives in.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AtomSet(FixedBitSet);

impl AtomSet {
    pub fn empty(universe: usize) -> Self {
        AtomSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        AtomSet(bits)
    }

    pub fn singleton(universe: usize, atom: usize) -> Self {
        let mut set = Self::empty(universe);
        set.insert(atom);
        set
    }

    pub fn from_atoms<I: IntoIterator<Item = usize>>(universe: usize, atoms: I) -> Self {
        let mut set = Self::empty(universe);
        for a in atoms {
            set.insert(a);
        }
        set
    }

    /// Decodes the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        Self::from_atoms(universe, (0..universe.min(64)).filter(|a| mask >> a & 1 == 1))
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.0.contains(atom)
    }

    pub fn insert(&mut self, atom: usize) {
        self.0.insert(atom);
    }

    pub fn remove(&mut self, atom: usize) {
        self.0.set(atom, false);
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.0.is_full()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &AtomSet) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &AtomSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &AtomSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> AtomSet {
        let mut out = self.clone();
        out.0.toggle_range(..);
        out
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for AtomSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_respects_universe() {
        let set = AtomSet::from_atoms(5, [1, 3]);
        assert_eq!(set.complement().to_vec(), vec![0, 2, 4]);
        assert!(AtomSet::full(5).is_full());
        assert_eq!(AtomSet::from_mask(4, 0b1010).to_vec(), vec![1, 3]);
    }
}
