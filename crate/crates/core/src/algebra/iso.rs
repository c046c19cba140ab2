//! Isomorphism of atom structures by joint colour refinement with
//! individualization, verified exactly at every discrete leaf.

use super::structure::AtomStructure;
use std::collections::{BTreeMap, HashMap};

/// Returns a bijection `f` with `a T_i b <=> f(a) T_i f(b)` and `a in D_ij <=> f(a) in D_ij`.
pub fn iso_atom_structures(left: &AtomStructure, right: &AtomStructure) -> Option<Vec<usize>> {
    if left.dim() != right.dim() || left.atom_count() != right.atom_count() {
        return None;
    }
    let pair = Pair { left, right, k: left.atom_count() };
    let initial: Vec<Vec<u32>> = (0..2 * pair.k)
        .map(|x| {
            let (s, a) = pair.side(x);
            let n = s.dim();
            (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| u32::from(s.in_diagonal(a, i, j))).collect()
        })
        .collect();
    let colours = relabel(&initial);
    let colours = pair.refine(colours);
    pair.search(colours)
}

pub fn are_isomorphic(left: &AtomStructure, right: &AtomStructure) -> bool {
    iso_atom_structures(left, right).is_some()
}

struct Pair<'a> {
    left: &'a AtomStructure,
    right: &'a AtomStructure,
    k: usize,
}

/// Assigns dense ids to signatures in sorted order, so both sides share one palette.
fn relabel<T: Ord>(signatures: &[T]) -> Vec<u32> {
    let ids: BTreeMap<&T, u32> = signatures.iter().collect::<std::collections::BTreeSet<_>>().into_iter().zip(0..).collect();
    signatures.iter().map(|s| ids[s]).collect()
}

/// A 64-bit finalizer. Collisions only coarsen the refinement, which stays isomorphism-invariant,
/// and every candidate mapping is verified exactly.
fn mix(mut x: u64) -> u64 {
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    x = x.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    x ^ (x >> 33)
}

fn class_count(colours: &[u32]) -> usize {
    colours.iter().collect::<std::collections::HashSet<_>>().len()
}

impl Pair<'_> {
    fn side(&self, x: usize) -> (&AtomStructure, usize) {
        if x < self.k {
            (self.left, x)
        } else {
            (self.right, x - self.k)
        }
    }

    fn offset(&self, x: usize) -> usize {
        if x < self.k {
            0
        } else {
            self.k
        }
    }

    fn refine(&self, mut colours: Vec<u32>) -> Vec<u32> {
        let mut classes = class_count(&colours);
        loop {
            let signatures: Vec<u64> = (0..2 * self.k)
                .map(|x| {
                    let (s, a) = self.side(x);
                    let off = self.offset(x);
                    let mut sig = mix(u64::from(colours[x]));
                    for i in 0..s.dim() {
                        for set in [s.column(i, a), s.row(i, a)] {
                            // Order-independent multiset hash of the neighbouring colours.
                            let part = set.iter().fold(0u64, |acc, b| acc.wrapping_add(mix(u64::from(colours[b + off]))));
                            sig = mix(sig ^ part);
                        }
                    }
                    sig
                })
                .collect();
            let next = relabel(&signatures);
            let next_classes = class_count(&next);
            colours = next;
            if next_classes == classes {
                return colours;
            }
            classes = next_classes;
        }
    }

    fn balanced(&self, colours: &[u32]) -> bool {
        let mut histogram: HashMap<u32, i64> = HashMap::new();
        for (x, &c) in colours.iter().enumerate() {
            *histogram.entry(c).or_default() += if x < self.k { 1 } else { -1 };
        }
        histogram.values().all(|&v| v == 0)
    }

    fn search(&self, colours: Vec<u32>) -> Option<Vec<usize>> {
        if !self.balanced(&colours) {
            return None;
        }
        let mut size: HashMap<u32, usize> = HashMap::new();
        for &c in &colours[..self.k] {
            *size.entry(c).or_default() += 1;
        }
        let target = size.iter().filter(|(_, &n)| n > 1).min_by_key(|(&c, &n)| (n, c)).map(|(&c, _)| c);
        let Some(target) = target else {
            let mut by_colour: HashMap<u32, usize> = HashMap::new();
            for b in 0..self.k {
                by_colour.insert(colours[self.k + b], b);
            }
            let mapping: Vec<usize> = (0..self.k).map(|a| by_colour[&colours[a]]).collect();
            return self.verify(&mapping).then_some(mapping);
        };
        let pivot = (0..self.k).find(|&a| colours[a] == target)?;
        let fresh = colours.iter().max().map_or(0, |m| m + 1);
        for candidate in (0..self.k).filter(|&b| colours[self.k + b] == target) {
            let mut trial = colours.clone();
            trial[pivot] = fresh;
            trial[self.k + candidate] = fresh;
            let refined = self.refine(trial);
            if let Some(found) = self.search(refined) {
                return Some(found);
            }
        }
        None
    }

    fn verify(&self, f: &[usize]) -> bool {
        let (l, r) = (self.left, self.right);
        let n = l.dim();
        (0..self.k).all(|a| {
            (0..n).all(|j| (0..j).all(|i| l.in_diagonal(a, i, j) == r.in_diagonal(f[a], i, j)))
                && (0..n).all(|i| {
                    let row = l.row(i, a);
                    row.count() == r.row(i, f[a]).count() && row.iter().all(|b| r.related(i, f[a], f[b]))
                })
        })
    }
}
