use super::colour::RainbowSig;
use super::graph::ColouredGraph;
use crate::algebra::AtomStructure;
use crate::atomset::AtomSet;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashMap};

/// Default bound on the number of atoms a rainbow construction may produce.
pub const DEFAULT_ATOM_CAP: usize = 50_000;

/// A surjection from `n` onto the nodes of a coloured graph, in canonical form: nodes are
/// numbered by their least preimage, so `kernel` is a restricted growth string and the
/// graph is fully determined.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RainbowAtom {
    pub kernel: Vec<usize>,
    pub graph: ColouredGraph,
}

impl RainbowAtom {
    /// Puts an arbitrary surjection `map: n -> nodes(graph)` into canonical form.
    pub fn canonical(map: &[usize], graph: &ColouredGraph) -> RainbowAtom {
        let mut order: Vec<usize> = Vec::new();
        for &v in map {
            if !order.contains(&v) {
                order.push(v);
            }
        }
        let kernel = map.iter().map(|v| order.iter().position(|w| w == v).expect("listed")).collect();
        RainbowAtom { kernel, graph: graph.induced(&order) }
    }

    /// The atom restricted to the coordinates other than `i`, canonicalized.
    pub fn restrict_off(&self, i: usize) -> (Vec<usize>, ColouredGraph) {
        let map: Vec<usize> = self.kernel.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &v)| v).collect();
        let r = RainbowAtom::canonical(&map, &self.graph);
        (r.kernel, r.graph)
    }

    pub fn name(&self) -> String {
        let k = self.graph.node_count();
        let kernel: String = self.kernel.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("");
        let mut parts = Vec::new();
        for q in 0..k {
            for p in 0..q {
                if let Some(c) = self.graph.label(p, q) {
                    parts.push(format!("{p}{q}={c}"));
                }
            }
        }
        for (set, shade) in self.graph.yellows() {
            parts.push(format!("{}=y:{shade}", set.iter().map(usize::to_string).collect::<String>()));
        }
        format!("{kernel}|{}", parts.join(";"))
    }
}

/// Restricted growth strings of length `n`: the set partitions of `n`.
pub(crate) fn kernels(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn grow(n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        let next = current.iter().max().map_or(0, |m| m + 1);
        for v in 0..=next {
            current.push(v);
            grow(n, current, out);
            current.pop();
        }
    }
    grow(n, &mut current, &mut out);
    out
}

/// Every consistent complete coloured graph on `k` nodes, yellows included.
pub(crate) fn consistent_graphs(sig: &RainbowSig, k: usize, cap: usize) -> Result<Vec<ColouredGraph>> {
    let colours = sig.colours();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|q| (0..q).map(move |p| (p, q))).collect();
    let mut edges_only = Vec::new();
    let mut graph = ColouredGraph::new(k);
    fn assign(
        sig: &RainbowSig,
        colours: &[super::colour::Colour],
        pairs: &[(usize, usize)],
        depth: usize,
        graph: &mut ColouredGraph,
        out: &mut Vec<ColouredGraph>,
        cap: usize,
    ) -> Result<()> {
        if depth == pairs.len() {
            if out.len() >= cap {
                return Err(Error::ResourceLimit { what: "rainbow atoms".into(), cap });
            }
            out.push(graph.clone());
            return Ok(());
        }
        let (p, q) = pairs[depth];
        for &c in colours {
            graph.set(p, q, c).expect("pair in range");
            // Edges are assigned in order of their larger endpoint, so every triangle is
            // complete once its edge (p, q) with the middle node p is set.
            let ok = (0..p).all(|r| match (graph.label(r, p), graph.label(p, q), graph.label(r, q)) {
                (Some(a), Some(b), Some(c3)) => !sig.forbidden(a, b, c3),
                _ => true,
            });
            if ok {
                assign(sig, colours, pairs, depth + 1, graph, out, cap)?;
            }
        }
        Ok(())
    }
    assign(sig, &colours, &pairs, 0, &mut graph, &mut edges_only, cap)?;
    let n = sig.dim();
    if sig.yellow_shades() == 0 || k + 1 < n {
        return Ok(edges_only.into_iter().filter(|g| sig.yellow_allows(g)).collect());
    }
    let subsets: Vec<Vec<usize>> = subsets_of_size(k, n - 1);
    let mut out = Vec::new();
    for g in edges_only {
        let options = sig.yellow_shades() + 1;
        let total = options.checked_pow(subsets.len() as u32).ok_or(Error::ResourceLimit { what: "yellow labellings".into(), cap })?;
        for mut code in 0..total {
            let mut h = g.clone();
            for set in &subsets {
                let choice = code % options;
                code /= options;
                if choice > 0 {
                    h.set_yellow(set.clone(), choice - 1);
                }
            }
            if sig.yellow_allows(&h) {
                if out.len() >= cap {
                    return Err(Error::ResourceLimit { what: "rainbow atoms".into(), cap });
                }
                out.push(h);
            }
        }
    }
    Ok(out)
}

fn subsets_of_size(k: usize, size: usize) -> Vec<Vec<usize>> {
    (0u64..1 << k).filter(|m| m.count_ones() as usize == size).map(|m| (0..k).filter(|&v| m >> v & 1 == 1).collect()).collect()
}

pub fn enumerate_atoms(sig: &RainbowSig) -> Result<Vec<RainbowAtom>> {
    enumerate_atoms_capped(sig, DEFAULT_ATOM_CAP)
}

pub fn enumerate_atoms_capped(sig: &RainbowSig, cap: usize) -> Result<Vec<RainbowAtom>> {
    let n = sig.dim();
    let mut by_size: BTreeMap<usize, Vec<ColouredGraph>> = BTreeMap::new();
    let mut atoms = Vec::new();
    for kernel in kernels(n) {
        let k = kernel.iter().max().map_or(0, |m| m + 1);
        if let std::collections::btree_map::Entry::Vacant(e) = by_size.entry(k) {
            e.insert(consistent_graphs(sig, k, cap)?);
        }
        for g in &by_size[&k] {
            if atoms.len() >= cap {
                return Err(Error::ResourceLimit { what: "rainbow atoms".into(), cap });
            }
            atoms.push(RainbowAtom { kernel: kernel.clone(), graph: g.clone() });
        }
    }
    atoms.sort();
    Ok(atoms)
}

/// The rainbow atom structure with its atoms in canonical order.
#[derive(Clone, Debug)]
pub struct RainbowStructure {
    pub sig: RainbowSig,
    pub atoms: Vec<RainbowAtom>,
    pub structure: AtomStructure,
    index: HashMap<RainbowAtom, usize>,
}

impl RainbowStructure {
    pub fn atom_index(&self, atom: &RainbowAtom) -> Option<usize> {
        self.index.get(atom).copied()
    }
}

pub fn rainbow_atom_structure(sig: &RainbowSig) -> Result<RainbowStructure> {
    rainbow_atom_structure_capped(sig, DEFAULT_ATOM_CAP)
}

pub fn rainbow_atom_structure_capped(sig: &RainbowSig, cap: usize) -> Result<RainbowStructure> {
    let n = sig.dim();
    let atoms = enumerate_atoms_capped(sig, cap)?;
    let k = atoms.len();
    let mut columns = vec![vec![AtomSet::empty(k); k]; n];
    for (i, column) in columns.iter_mut().enumerate() {
        let mut classes: HashMap<(Vec<usize>, ColouredGraph), Vec<usize>> = HashMap::new();
        for (a, atom) in atoms.iter().enumerate() {
            classes.entry(atom.restrict_off(i)).or_default().push(a);
        }
        for members in classes.values() {
            let set = AtomSet::from_atoms(k, members.iter().copied());
            for &b in members {
                column[b] = set.clone();
            }
        }
    }
    let diagonals = (0..n)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .map(|(i, j)| AtomSet::from_atoms(k, (0..k).filter(|&a| atoms[a].kernel[i] == atoms[a].kernel[j])))
        .collect();
    let structure = AtomStructure::from_columns(n, k, columns, diagonals).with_names(atoms.iter().map(RainbowAtom::name).collect())?;
    let index = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    Ok(RainbowStructure { sig: sig.clone(), atoms, structure, index })
}
