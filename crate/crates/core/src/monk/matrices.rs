use super::alpha::{node_colour_triple_allowed, NodeColour};
use super::ra::RaAtomStructure;
use crate::algebra::{pair_index, AtomStructure};
use crate::atomset::AtomSet;
use crate::error::{invalid, Error, Result};
use crate::graphs::Graph;
use crate::rainbow::kernels;
use std::collections::HashMap;
use std::hash::Hash;

/// Default bound on the number of atoms produced by the constructions in this module.
pub const DEFAULT_MATRIX_CAP: usize = 50_000;

/// The basic matrices of an RA atom structure together with the cylindric atom structure on them.
#[derive(Clone, Debug)]
pub struct MatrixStructure {
    pub dim: usize,
    /// Row-major `dim x dim` matrices of RA atoms, sorted lexicographically.
    pub matrices: Vec<Vec<usize>>,
    pub structure: AtomStructure,
}

/// Atom structure whose atoms come with a key per coordinate: `a T_i b` iff the keys off `i` agree.
fn structure_from_keys<K: Hash + Eq>(
    dim: usize,
    count: usize,
    key_off: impl Fn(usize, usize) -> K,
    in_diagonal: impl Fn(usize, usize, usize) -> bool,
) -> AtomStructure {
    let mut columns = vec![vec![AtomSet::empty(count); count]; dim];
    for (i, column) in columns.iter_mut().enumerate() {
        let mut classes: HashMap<K, Vec<usize>> = HashMap::new();
        for a in 0..count {
            classes.entry(key_off(a, i)).or_default().push(a);
        }
        for members in classes.values() {
            let set = AtomSet::from_atoms(count, members.iter().copied());
            for &b in members {
                column[b] = set.clone();
            }
        }
    }
    let mut diagonals = vec![AtomSet::empty(count); dim * dim.saturating_sub(1) / 2];
    for j in 0..dim {
        for i in 0..j {
            diagonals[pair_index(i, j)] = AtomSet::from_atoms(count, (0..count).filter(|&a| in_diagonal(a, i, j)));
        }
    }
    AtomStructure::from_columns(dim, count, columns, diagonals)
}

pub fn basic_matrices(r: &RaAtomStructure, dim: usize) -> Result<MatrixStructure> {
    basic_matrices_capped(r, dim, DEFAULT_MATRIX_CAP)
}

/// All `dim x dim` matrices with identity atoms on the diagonal, `m[j][i]` the converse of
/// `m[i][j]`, and every triple `(m[i][j], m[j][k], m[i][k])` consistent.
pub fn basic_matrices_capped(r: &RaAtomStructure, dim: usize, cap: usize) -> Result<MatrixStructure> {
    if dim < 2 {
        return invalid("matrix dimension must be at least 2");
    }
    let mut cells: Vec<(usize, usize)> = (0..dim).map(|i| (i, i)).collect();
    cells.extend((0..dim).flat_map(|j| (0..j).map(move |i| (i, j))));
    let mut current: Vec<Option<usize>> = vec![None; dim * dim];
    let mut out = Vec::new();
    fill(r, dim, &cells, 0, &mut current, &mut out, cap)?;
    out.sort();
    let count = out.len();
    let structure = structure_from_keys(
        dim,
        count,
        |a, i| {
            let m = &out[a];
            (0..dim * dim).map(|p| if p / dim == i || p % dim == i { usize::MAX } else { m[p] }).collect::<Vec<_>>()
        },
        |a, i, j| r.is_identity(out[a][i * dim + j]),
    );
    let names = out
        .iter()
        .map(|m| m.chunks(dim).map(|row| row.iter().map(|&x| r.names()[x].as_str()).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join(";"))
        .collect();
    Ok(MatrixStructure { dim, structure: structure.with_names(names)?, matrices: out })
}

fn fill(
    r: &RaAtomStructure,
    dim: usize,
    cells: &[(usize, usize)],
    next: usize,
    m: &mut Vec<Option<usize>>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if next == cells.len() {
        if out.len() >= cap {
            return Err(Error::ResourceLimit { what: "basic matrices".into(), cap });
        }
        out.push(m.iter().map(|x| x.expect("complete")).collect());
        return Ok(());
    }
    let (p, q) = cells[next];
    for a in 0..r.atom_count() {
        if p == q && !r.is_identity(a) {
            continue;
        }
        m[p * dim + q] = Some(a);
        m[q * dim + p] = Some(r.converse(a));
        if triples_consistent(r, dim, m) {
            fill(r, dim, cells, next + 1, m, out, cap)?;
        }
    }
    m[p * dim + q] = None;
    m[q * dim + p] = None;
    Ok(())
}

fn triples_consistent(r: &RaAtomStructure, dim: usize, m: &[Option<usize>]) -> bool {
    (0..dim).all(|i| {
        (0..dim).all(|j| {
            (0..dim).all(|k| match (m[i * dim + j], m[j * dim + k], m[i * dim + k]) {
                (Some(a), Some(b), Some(c)) => r.consistent(a, b, c),
                _ => true,
            })
        })
    })
}

/// A point configuration in canonical form: `kernel` maps coordinates onto nodes numbered by
/// least preimage, and `labels[pair_index(p, q)]` labels the nodes `p < q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub kernel: Vec<usize>,
    pub labels: Vec<NodeColour>,
}

impl Configuration {
    fn node_count(&self) -> usize {
        self.kernel.iter().max().map_or(0, |m| m + 1)
    }

    fn label(&self, p: usize, q: usize) -> NodeColour {
        self.labels[pair_index(p.min(q), p.max(q))]
    }

    fn restrict_off(&self, i: usize) -> Configuration {
        let map: Vec<usize> = self.kernel.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &v)| v).collect();
        let mut order: Vec<usize> = Vec::new();
        for &v in &map {
            if !order.contains(&v) {
                order.push(v);
            }
        }
        let kernel = map.iter().map(|v| order.iter().position(|w| w == v).expect("listed")).collect();
        let mut labels = Vec::new();
        for q in 0..order.len() {
            for p in 0..q {
                labels.push(self.label(order[p], order[q]));
            }
        }
        Configuration { kernel, labels }
    }

    pub fn name(&self) -> String {
        let kernel: String = self.kernel.iter().map(usize::to_string).collect();
        let mut parts = Vec::new();
        for q in 0..self.node_count() {
            for p in 0..q {
                parts.push(format!("{p}{q}={}", self.label(p, q).name()));
            }
        }
        format!("{kernel}|{}", parts.join(";"))
    }
}

/// The cylindric atom structure on labelled point configurations: at most `dim` points, every
/// pair of distinct points labelled `node:colour`, and every triangle obeying the graph rule.
#[derive(Clone, Debug)]
pub struct ConfigurationStructure {
    pub configurations: Vec<Configuration>,
    pub structure: AtomStructure,
}

pub fn monk_ca_atom_structure(g: &Graph, colours: usize, dim: usize) -> Result<ConfigurationStructure> {
    monk_ca_atom_structure_capped(g, colours, dim, DEFAULT_MATRIX_CAP)
}

pub fn monk_ca_atom_structure_capped(g: &Graph, colours: usize, dim: usize, cap: usize) -> Result<ConfigurationStructure> {
    if dim < 2 || colours == 0 {
        return invalid("need dimension at least 2 and at least one colour");
    }
    let labels: Vec<NodeColour> = (0..g.node_count()).flat_map(|node| (0..colours).map(move |colour| NodeColour { node, colour })).collect();
    let mut by_size: HashMap<usize, Vec<Vec<NodeColour>>> = HashMap::new();
    let mut configurations = Vec::new();
    for kernel in kernels(dim) {
        let k = kernel.iter().max().map_or(0, |m| m + 1);
        let labellings = by_size.entry(k).or_insert_with(|| labellings(g, &labels, k));
        for l in labellings.iter() {
            if configurations.len() >= cap {
                return Err(Error::ResourceLimit { what: "point configurations".into(), cap });
            }
            configurations.push(Configuration { kernel: kernel.clone(), labels: l.clone() });
        }
    }
    configurations.sort();
    let structure = structure_from_keys(
        dim,
        configurations.len(),
        |a, i| configurations[a].restrict_off(i),
        |a, i, j| configurations[a].kernel[i] == configurations[a].kernel[j],
    );
    let names = configurations.iter().map(Configuration::name).collect();
    Ok(ConfigurationStructure { structure: structure.with_names(names)?, configurations })
}

/// Every labelling of the pairs of `k` points in which each triangle obeys the graph rule.
fn labellings(g: &Graph, labels: &[NodeColour], k: usize) -> Vec<Vec<NodeColour>> {
    let pairs = k * k.saturating_sub(1) / 2;
    let mut out = Vec::new();
    let mut current: Vec<NodeColour> = Vec::with_capacity(pairs);
    extend(g, labels, k, pairs, &mut current, &mut out);
    out
}

fn extend(g: &Graph, labels: &[NodeColour], k: usize, pairs: usize, current: &mut Vec<NodeColour>, out: &mut Vec<Vec<NodeColour>>) {
    if current.len() == pairs {
        out.push(current.clone());
        return;
    }
    // Pairs are filled in pair-index order, so the new pair (p, q) closes triangles (r, p, q) with r < p.
    let idx = current.len();
    let q = (0..k).find(|&q| pair_index(0, q + 1) > idx).expect("pair in range");
    let p = idx - pair_index(0, q);
    for &l in labels {
        let ok = (0..p).all(|r| node_colour_triple_allowed(g, current[pair_index(r, p)], current[pair_index(r, q)], l));
        if ok {
            current.push(l);
            extend(g, labels, k, pairs, current, out);
            current.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{are_isomorphic, check_ca_axioms, complex_algebra};
    use crate::graphs::{make_graph, GraphKind};
    use crate::monk::alpha::alpha_of_graph;

    #[test]
    fn matrices_of_a_one_node_graph() {
        // Atoms Id, 0:0; only the identity and the all-0:0 matrix pattern on distinct points,
        // minus the monochromatic triangle.
        let g = Graph::new(1, []).unwrap();
        let r = alpha_of_graph(&g, 1).unwrap();
        let m = basic_matrices(&r, 3).unwrap();
        // kernels of 3: {012}: triangle forbidden; {01|2}, {02|1}, {0|12}: 1 each; {012 merged}: 1.
        assert_eq!(m.matrices.len(), 4);
    }

    #[test]
    fn matrices_and_configurations_agree_on_small_graphs() {
        for (g, colours) in [(Graph::new(2, [(0, 1)]).unwrap(), 2), (Graph::new(2, []).unwrap(), 2), (make_graph(GraphKind::Complete(3)).unwrap(), 1)]
        {
            let r = alpha_of_graph(&g, colours).unwrap();
            let m = basic_matrices(&r, 3).unwrap();
            let c = monk_ca_atom_structure(&g, colours, 3).unwrap();
            assert_eq!(m.matrices.len(), c.configurations.len());
            assert!(are_isomorphic(&m.structure, &c.structure));
            assert!(check_ca_axioms(&complex_algebra(m.structure.clone())).all_passed());
        }
    }

    #[test]
    fn label_choice_is_symmetric_in_the_first_pair() {
        let g = Graph::new(2, []).unwrap();
        let r = alpha_of_graph(&g, 1).unwrap();
        let m = basic_matrices(&r, 2).unwrap();
        // Id matrix plus one matrix per non-identity atom.
        assert_eq!(m.matrices.len(), 3);
        let c = monk_ca_atom_structure(&g, 1, 2).unwrap();
        assert_eq!(c.configurations.len(), 3);
    }
}
