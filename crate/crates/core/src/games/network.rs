use crate::algebra::AtomStructure;
use crate::atomset::AtomSet;
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// An atomic network: every `dim`-tuple of nodes labelled by an atom. Tuples are coded as
/// `sum x_k * nodes^k`, so coordinate 0 is least significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Network {
    dim: usize,
    nodes: usize,
    labels: Vec<u32>,
}

pub(crate) fn tuple_code(nodes: usize, tuple: &[usize]) -> usize {
    tuple.iter().rev().fold(0, |acc, &x| acc * nodes + x)
}

pub(crate) fn decode_tuple(nodes: usize, dim: usize, mut code: usize) -> Vec<usize> {
    (0..dim)
        .map(|_| {
            let x = code % nodes;
            code /= nodes;
            x
        })
        .collect()
}

impl Network {
    pub fn new(dim: usize, nodes: usize, labels: Vec<u32>) -> Result<Self> {
        if dim == 0 || nodes == 0 {
            return invalid("a network needs a positive dimension and at least one node");
        }
        let expected = nodes.checked_pow(dim as u32).ok_or_else(|| Error::InvalidArgument("network too large".into()))?;
        if labels.len() != expected {
            return invalid(format!("expected {expected} labels, got {}", labels.len()));
        }
        Ok(Network { dim, nodes, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn tuple_count(&self) -> usize {
        self.labels.len()
    }

    pub fn tuple(&self, code: usize) -> Vec<usize> {
        decode_tuple(self.nodes, self.dim, code)
    }

    pub fn code(&self, tuple: &[usize]) -> usize {
        tuple_code(self.nodes, tuple)
    }

    pub fn label(&self, tuple: &[usize]) -> usize {
        self.labels[self.code(tuple)] as usize
    }

    /// Some node `w` with `label(tuple[i := w]) == atom`.
    pub fn witness(&self, tuple: &[usize], i: usize, atom: usize) -> Option<usize> {
        let mut t = tuple.to_vec();
        (0..self.nodes).find(|&w| {
            t[i] = w;
            self.label(&t) == atom
        })
    }

    /// The subnetwork on `keep`, with `keep[p]` renamed to `p`.
    pub fn induced(&self, keep: &[usize]) -> Network {
        let k = keep.len();
        let labels = (0..k.pow(self.dim as u32))
            .map(|code| {
                let t: Vec<usize> = decode_tuple(k, self.dim, code).into_iter().map(|p| keep[p]).collect();
                self.labels[self.code(&t)]
            })
            .collect();
        Network { dim: self.dim, nodes: k, labels }
    }

    /// Removes `node`; later nodes shift down by one.
    pub fn delete(&self, node: usize) -> Result<Network> {
        if node >= self.nodes || self.nodes == 1 {
            return invalid(format!("cannot delete node {node} from a network with {} nodes", self.nodes));
        }
        let keep: Vec<usize> = (0..self.nodes).filter(|&v| v != node).collect();
        Ok(self.induced(&keep))
    }

    /// Renames node `v` to `perm[v]`.
    pub fn renamed(&self, perm: &[usize]) -> Network {
        let mut labels = vec![0; self.labels.len()];
        for (code, &l) in self.labels.iter().enumerate() {
            let t: Vec<usize> = self.tuple(code).into_iter().map(|v| perm[v]).collect();
            labels[tuple_code(self.nodes, &t)] = l;
        }
        Network { dim: self.dim, nodes: self.nodes, labels }
    }

    /// Whether `self` is `other` restricted to its first `self.node_count()` nodes.
    pub fn is_prefix_of(&self, other: &Network) -> bool {
        self.dim == other.dim
            && self.nodes <= other.nodes
            && self.labels.iter().enumerate().all(|(code, &l)| other.labels[other.code(&self.tuple(code))] == l)
    }

    pub fn to_dot(&self, names: Option<&[String]>) -> String {
        let mut out = String::from("digraph network {\n  node [shape=circle];\n");
        for v in 0..self.nodes {
            out.push_str(&format!("  n{v} [label=\"{v}\"];\n"));
        }
        for (code, &l) in self.labels.iter().enumerate() {
            let t = self.tuple(code);
            let name = names.map_or_else(|| l.to_string(), |n| n[l as usize].clone());
            let label = format!("({}) {}", t.iter().map(usize::to_string).collect::<Vec<_>>().join(","), name.replace('"', "'"));
            out.push_str(&format!("  t{code} [shape=box, label=\"{label}\"];\n"));
            let mut seen = Vec::new();
            for &v in &t {
                if !seen.contains(&v) {
                    seen.push(v);
                    out.push_str(&format!("  t{code} -> n{v};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Why a labelling fails to be a network.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetworkViolation {
    pub tuple: Vec<usize>,
    pub other: Option<Vec<usize>>,
    pub reason: String,
}

/// Both network conditions, checked over every tuple and every `i`-neighbour.
pub fn check_network(s: &AtomStructure, n: &Network) -> std::result::Result<(), NetworkViolation> {
    if n.dim != s.dim() {
        return Err(NetworkViolation { tuple: vec![], other: None, reason: "dimension mismatch".into() });
    }
    if let Some(code) = n.labels.iter().position(|&l| l as usize >= s.atom_count()) {
        return Err(NetworkViolation { tuple: n.tuple(code), other: None, reason: "label out of range".into() });
    }
    for code in 0..n.tuple_count() {
        let t = n.tuple(code);
        let a = n.labels[code] as usize;
        for j in 0..n.dim {
            for i in 0..j {
                if s.in_diagonal(a, i, j) != (t[i] == t[j]) {
                    return Err(NetworkViolation { tuple: t, other: None, reason: format!("diagonal {i}{j} condition fails") });
                }
            }
        }
        for i in 0..n.dim {
            let mut u = t.clone();
            for w in 0..n.nodes {
                u[i] = w;
                let b = n.label(&u);
                if !s.related(i, a, b) {
                    return Err(NetworkViolation { tuple: t, other: Some(u), reason: format!("label not below c_{i} of the neighbour") });
                }
            }
        }
    }
    Ok(())
}

pub fn is_network(s: &AtomStructure, n: &Network) -> bool {
    check_network(s, n).is_ok()
}

/// The set of pairs `i < j` with `t_i == t_j`, as a bitmask in pair-index order.
fn equality_pattern(t: &[usize]) -> usize {
    let mut mask = 0;
    let mut bit = 0;
    for j in 0..t.len() {
        for i in 0..j {
            if t[i] == t[j] {
                mask |= 1 << bit;
            }
            bit += 1;
        }
    }
    mask
}

/// Receives one completion; returning true stops the enumeration.
/// Backtracking nodes one completion enumeration may visit before giving up.
const SEARCH_STEP_CAP: usize = 2_000_000;

pub(crate) type Emit<'e> = dyn FnMut(Network) -> Result<bool> + 'e;

/// Enumerates completions of partial networks by forward checking over the binary
/// `i`-neighbour constraints.
pub(crate) struct Completer<'a> {
    structure: &'a AtomStructure,
    /// `compat[i][b]`: atoms `a` with `a T_i b` and `b T_i a`.
    compat: Vec<Vec<AtomSet>>,
    /// Atoms whose diagonal memberships match each equality pattern, restricted to atoms
    /// `T_i`-related to themselves for every `i`.
    by_pattern: BTreeMap<usize, AtomSet>,
    /// `compat` packed into `words` machine words per set, for the inner search loop.
    compat_flat: Vec<u64>,
    words: usize,
}

/// One atom set per tuple code, packed contiguously so a search frame clones in one copy.
#[derive(Clone)]
struct Domains {
    words: usize,
    bits: Vec<u64>,
}

impl Domains {
    fn get(&self, code: usize) -> &[u64] {
        &self.bits[code * self.words..(code + 1) * self.words]
    }

    fn get_mut(&mut self, code: usize) -> &mut [u64] {
        &mut self.bits[code * self.words..(code + 1) * self.words]
    }

    fn count(&self, code: usize) -> u32 {
        self.get(code).iter().map(|w| w.count_ones()).sum()
    }

    fn iter(&self, code: usize) -> impl Iterator<Item = usize> + '_ {
        self.get(code).iter().enumerate().flat_map(|(at, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| at * 64 + b))
    }

    /// Intersects the set at `code` with `mask`; false when it becomes empty.
    fn restrict(&mut self, code: usize, mask: &[u64]) -> bool {
        let mut any = 0;
        for (d, m) in self.get_mut(code).iter_mut().zip(mask) {
            *d &= m;
            any |= *d;
        }
        any != 0
    }
}

impl<'a> Completer<'a> {
    pub(crate) fn new(structure: &'a AtomStructure) -> Self {
        let k = structure.atom_count();
        let n = structure.dim();
        let compat: Vec<Vec<AtomSet>> = (0..n).map(|i| (0..k).map(|b| structure.column(i, b).intersection(structure.row(i, b))).collect()).collect();
        let mut by_pattern: BTreeMap<usize, AtomSet> = BTreeMap::new();
        for a in 0..k {
            if !(0..n).all(|i| structure.related(i, a, a)) {
                continue;
            }
            let mut mask = 0;
            let mut bit = 0;
            for j in 0..n {
                for i in 0..j {
                    if structure.in_diagonal(a, i, j) {
                        mask |= 1 << bit;
                    }
                    bit += 1;
                }
            }
            by_pattern.entry(mask).or_insert_with(|| AtomSet::empty(k)).insert(a);
        }
        let words = k.div_ceil(64).max(1);
        let mut compat_flat = vec![0u64; n * k * words];
        for (i, row) in compat.iter().enumerate() {
            for (b, set) in row.iter().enumerate() {
                for a in set.iter() {
                    compat_flat[(i * k + b) * words + a / 64] |= 1 << (a % 64);
                }
            }
        }
        Completer { structure, compat, by_pattern, compat_flat, words }
    }

    pub(crate) fn structure(&self) -> &AtomStructure {
        self.structure
    }

    /// Every network on `nodes` nodes agreeing with `fixed` where it is `Some`. Fixed labels
    /// are trusted to be mutually consistent. Fails once more than `cap` completions exist.
    pub(crate) fn complete(&self, nodes: usize, fixed: &[Option<u32>], cap: usize) -> Result<Vec<Network>> {
        let mut out = Vec::new();
        self.stream(nodes, fixed, &mut |net| {
            if out.len() >= cap {
                return Err(Error::ResourceLimit { what: "network completions".into(), cap });
            }
            out.push(net);
            Ok(false)
        })?;
        Ok(out)
    }

    /// Hands each completion to `emit` until it returns true; the result says whether it did.
    fn stream(&self, nodes: usize, fixed: &[Option<u32>], emit: &mut Emit<'_>) -> Result<bool> {
        let n = self.structure.dim();
        let k = self.structure.atom_count();
        let words = self.words;
        let empty = AtomSet::empty(k);
        let mut domains = Domains { words, bits: vec![0; fixed.len() * words] };
        for (code, f) in fixed.iter().enumerate() {
            let t = decode_tuple(nodes, n, code);
            let pattern = self.by_pattern.get(&equality_pattern(&t)).unwrap_or(&empty);
            let d = match f {
                Some(l) => {
                    if !pattern.contains(*l as usize) {
                        return Ok(false);
                    }
                    AtomSet::singleton(k, *l as usize)
                }
                None => {
                    let mut d = pattern.clone();
                    let mut u = t.clone();
                    for i in 0..n {
                        for w in 0..nodes {
                            if w == t[i] {
                                continue;
                            }
                            u[i] = w;
                            if let Some(l) = fixed[tuple_code(nodes, &u)] {
                                d.intersect_with(&self.compat[i][l as usize]);
                            }
                        }
                        u[i] = t[i];
                    }
                    if d.is_empty() {
                        return Ok(false);
                    }
                    d
                }
            };
            for a in d.iter() {
                domains.get_mut(code)[a / 64] |= 1 << (a % 64);
            }
        }
        let mut assigned = fixed.to_vec();
        let mut steps = 0;
        self.search(nodes, &mut assigned, domains, &mut steps, emit)
    }

    /// Depth-first over the open tuples, smallest domain first. Returns true once `emit` asks to stop.
    fn search(&self, nodes: usize, assigned: &mut Vec<Option<u32>>, domains: Domains, steps: &mut usize, emit: &mut Emit<'_>) -> Result<bool> {
        *steps += 1;
        if *steps > SEARCH_STEP_CAP {
            return Err(Error::ResourceLimit { what: "completion search steps".into(), cap: SEARCH_STEP_CAP });
        }
        let n = self.structure.dim();
        let next = (0..assigned.len()).filter(|&c| assigned[c].is_none()).min_by_key(|&c| (domains.count(c), c));
        let Some(code) = next else {
            let labels = assigned.iter().map(|l| l.expect("complete")).collect();
            return emit(Network { dim: n, nodes, labels });
        };
        let t = decode_tuple(nodes, n, code);
        let mut neighbours = Vec::with_capacity(n * nodes);
        let mut u = t.clone();
        for i in 0..n {
            for w in 0..nodes {
                if w == t[i] {
                    continue;
                }
                u[i] = w;
                let c = tuple_code(nodes, &u);
                if assigned[c].is_none() {
                    neighbours.push((i, c));
                }
            }
            u[i] = t[i];
        }
        let choices: Vec<usize> = domains.iter(code).collect();
        for a in choices {
            let mut next_domains = domains.clone();
            let ok = neighbours.iter().all(|&(i, c)| next_domains.restrict(c, self.compat_words(i, a)));
            if ok {
                assigned[code] = Some(a as u32);
                let stop = self.search(nodes, assigned, next_domains, steps, emit)?;
                assigned[code] = None;
                if stop {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn compat_words(&self, i: usize, atom: usize) -> &[u64] {
        let k = self.structure.atom_count();
        let at = (i * k + atom) * self.words;
        &self.compat_flat[at..at + self.words]
    }

    /// Extensions of `base` by one new node `z` with `label(tuple[i := z]) == atom`.
    pub(crate) fn extensions(&self, base: &Network, tuple: &[usize], i: usize, atom: usize, cap: usize) -> Result<Vec<Network>> {
        let (nodes, fixed) = self.extension_frame(base, tuple, i, atom);
        self.complete(nodes, &fixed, cap)
    }

    /// Streams the extensions of `base`, stopping when `emit` returns true.
    pub(crate) fn each_extension(&self, base: &Network, tuple: &[usize], i: usize, atom: usize, emit: &mut Emit<'_>) -> Result<bool> {
        let (nodes, fixed) = self.extension_frame(base, tuple, i, atom);
        self.stream(nodes, &fixed, emit)
    }

    fn extension_frame(&self, base: &Network, tuple: &[usize], i: usize, atom: usize) -> (usize, Vec<Option<u32>>) {
        let n = self.structure.dim();
        let nodes = base.nodes + 1;
        let mut fixed = vec![None; nodes.pow(n as u32)];
        for code in 0..base.tuple_count() {
            fixed[tuple_code(nodes, &base.tuple(code))] = Some(base.labels[code]);
        }
        let mut target = tuple.to_vec();
        target[i] = base.nodes;
        fixed[tuple_code(nodes, &target)] = Some(atom as u32);
        (nodes, fixed)
    }

    /// Networks on the fewest nodes containing a tuple labelled `atom`; empty when the
    /// diagonal memberships of `atom` are not those of any tuple.
    pub(crate) fn openings(&self, atom: usize, cap: usize) -> Result<Vec<Network>> {
        let n = self.structure.dim();
        let mut tuple = Vec::with_capacity(n);
        for j in 0..n {
            let value =
                (0..j).find(|&i| self.structure.in_diagonal(atom, i, j)).map_or_else(|| tuple.iter().max().map_or(0, |m| m + 1), |i| tuple[i]);
            tuple.push(value);
        }
        let nodes: usize = tuple.iter().max().map_or(1, |m| m + 1);
        let mut fixed = vec![None; nodes.pow(n as u32)];
        fixed[tuple_code(nodes, &tuple)] = Some(atom as u32);
        self.complete(nodes, &fixed, cap)
    }
}

/// Node colours refined until stable. Hash collisions only coarsen the partition, which
/// stays invariant under renaming.
fn refine(n: &Network, mut colours: Vec<u64>) -> Vec<u64> {
    let mix = |mut x: u64| {
        x ^= x >> 33;
        x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
        x ^= x >> 33;
        x = x.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
        x ^ (x >> 33)
    };
    let classes = |c: &[u64]| c.iter().collect::<std::collections::BTreeSet<_>>().len();
    let mut count = classes(&colours);
    loop {
        let mut acc: Vec<u64> = colours.iter().map(|&c| mix(c)).collect();
        for code in 0..n.tuple_count() {
            let t = n.tuple(code);
            for (pos, &v) in t.iter().enumerate() {
                if t[..pos].contains(&v) {
                    continue;
                }
                let mut h = mix(u64::from(n.labels[code]) ^ 0x9e37_79b9);
                for &x in &t {
                    h = mix(h ^ if x == v { u64::MAX } else { colours[x] });
                }
                acc[v] = acc[v].wrapping_add(h);
            }
        }
        let next = dense(&acc);
        let next_count = classes(&next);
        colours = next;
        if next_count == count {
            return colours;
        }
        count = next_count;
    }
}

fn dense(values: &[u64]) -> Vec<u64> {
    let mut sorted: Vec<u64> = values.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    values.iter().map(|v| sorted.binary_search(v).expect("present") as u64).collect()
}

/// Maximum number of leaves explored when canonicalizing. Past it the best form found so far
/// is returned: still an isomorphic copy, so memo tables stay sound, only less shared.
const CANONICAL_LEAF_CAP: usize = 5_000;

/// A canonical representative under node renaming, with the renaming applied (`perm[old] = new`).
pub fn canonical_form(n: &Network) -> (Network, Vec<usize>) {
    let initial: Vec<u64> = (0..n.nodes).map(|v| u64::from(n.label(&vec![v; n.dim]) as u32)).collect();
    let colours = refine(n, dense(&initial));
    let mut best: Option<(Network, Vec<usize>)> = None;
    let mut leaves = 0;
    canonical_search(n, colours, &mut best, &mut leaves);
    best.expect("at least one leaf")
}

fn canonical_search(n: &Network, colours: Vec<u64>, best: &mut Option<(Network, Vec<usize>)>, leaves: &mut usize) {
    if *leaves >= CANONICAL_LEAF_CAP && best.is_some() {
        return;
    }
    let mut sizes: BTreeMap<u64, usize> = BTreeMap::new();
    for &c in &colours {
        *sizes.entry(c).or_default() += 1;
    }
    let Some((&cell, _)) = sizes.iter().find(|(_, &size)| size > 1) else {
        *leaves += 1;
        let perm: Vec<usize> = colours.iter().map(|&c| c as usize).collect();
        let candidate = n.renamed(&perm);
        if best.as_ref().is_none_or(|(b, _)| candidate.labels < b.labels) {
            *best = Some((candidate, perm));
        }
        return;
    };
    for v in (0..n.nodes).filter(|&v| colours[v] == cell) {
        let split: Vec<u64> = colours.iter().enumerate().map(|(w, &c)| 2 * c + u64::from(!(w == v) && c == cell)).collect();
        let refined = refine(n, dense(&split));
        canonical_search(n, refined, best, leaves);
    }
}
