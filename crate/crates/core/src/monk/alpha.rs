use super::ra::RaAtomStructure;
use crate::error::{invalid, Result};
use crate::graphs::Graph;
use std::collections::BTreeSet;

/// Label of a non-identity atom of the graph algebra: a node with one of `colours` colours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeColour {
    pub node: usize,
    pub colour: usize,
}

impl NodeColour {
    pub fn name(self) -> String {
        format!("{}:{}", self.node, self.colour)
    }
}

/// Non-identity triple rule: some two nodes are adjacent, or the colours are not all equal.
pub fn node_colour_triple_allowed(g: &Graph, a: NodeColour, b: NodeColour, c: NodeColour) -> bool {
    let distinct_colours = !(a.colour == b.colour && b.colour == c.colour);
    distinct_colours || g.has_edge(a.node, b.node) || g.has_edge(b.node, c.node) || g.has_edge(a.node, c.node)
}

/// The symmetric integral atom structure with atoms `Id` and `node:colour` for every node of
/// `g` and every colour below `colours`.
pub fn alpha_of_graph(g: &Graph, colours: usize) -> Result<RaAtomStructure> {
    if colours == 0 {
        return invalid("at least one colour is required");
    }
    let labels: Vec<NodeColour> = (0..g.node_count()).flat_map(|node| (0..colours).map(move |colour| NodeColour { node, colour })).collect();
    let k = labels.len() + 1;
    let names = std::iter::once("Id".to_string()).chain(labels.iter().map(|l| l.name())).collect();
    let mut forbidden = BTreeSet::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let allowed = if a == 0 || b == 0 || c == 0 {
                    identity_triple_allowed(a, b, c)
                } else {
                    node_colour_triple_allowed(g, labels[a - 1], labels[b - 1], labels[c - 1])
                };
                if !allowed {
                    forbidden.insert([a, b, c]);
                }
            }
        }
    }
    RaAtomStructure::new(names, BTreeSet::from([0]), (0..k).collect(), forbidden)
}

/// With atom 0 the single identity: a triple containing it is allowed iff the other two agree.
fn identity_triple_allowed(a: usize, b: usize, c: usize) -> bool {
    match (a, b, c) {
        (0, x, y) | (x, 0, y) | (x, y, 0) => x == y,
        _ => unreachable!("caller passes a triple containing the identity"),
    }
}

/// Hue of a non-identity atom in the three-hue structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hue {
    Red,
    Yellow,
    Blue,
}

impl Hue {
    pub const ALL: [Hue; 3] = [Hue::Red, Hue::Yellow, Hue::Blue];

    fn letter(self) -> char {
        match self {
            Hue::Red => 'r',
            Hue::Yellow => 'y',
            Hue::Blue => 'b',
        }
    }
}

/// Symmetric integral structure with atoms `Id`, `r:i`, `y:i`, `b:i` for `i < levels`. Within a
/// hue, `(x:i, x:i, x:j)` is forbidden for `i <= j`, together with its permutations.
pub fn rybh_algebra(levels: usize) -> Result<RaAtomStructure> {
    if levels == 0 {
        return invalid("at least one level is required");
    }
    let atoms: Vec<(Hue, usize)> = Hue::ALL.iter().flat_map(|&h| (0..levels).map(move |i| (h, i))).collect();
    let k = atoms.len() + 1;
    let names = std::iter::once("Id".to_string()).chain(atoms.iter().map(|(h, i)| format!("{}:{i}", h.letter()))).collect();
    let index = |h: Hue, i: usize| 1 + Hue::ALL.iter().position(|&x| x == h).expect("hue") * levels + i;
    let mut generators = Vec::new();
    for x in 1..k {
        for y in 1..k {
            if x != y {
                generators.push([0, x, y]);
            }
        }
        generators.push([0, 0, x]);
    }
    for h in Hue::ALL {
        for j in 0..levels {
            for i in 0..=j {
                generators.push([index(h, i), index(h, i), index(h, j)]);
            }
        }
    }
    RaAtomStructure::from_forbidden_generators(names, BTreeSet::from([0]), (0..k).collect(), generators)
}

/// Splits the self-converse non-identity atom `target` into `parts` copies named
/// `<target>` with the hue letter and level fused, then `:copy` (so `r:0` becomes `r0:0`, `r0:1`, ...).
///
/// A triple without identity atoms is forbidden iff the triple obtained by merging the copies
/// back is forbidden. A triple with an identity atom follows the identity law on the split atoms.
pub fn split_atom(r: &RaAtomStructure, target: usize, parts: usize) -> Result<RaAtomStructure> {
    if target >= r.atom_count() {
        return invalid(format!("atom {target} out of range"));
    }
    if r.is_identity(target) {
        return invalid("identity atoms cannot be split");
    }
    if r.converse(target) != target {
        return invalid(format!("atom {} is not self-converse", r.names()[target]));
    }
    if parts == 0 {
        return invalid("at least one part is required");
    }
    // new atom -> (original atom, copy number when it is a copy)
    let mut origin: Vec<(usize, Option<usize>)> = Vec::new();
    for a in 0..r.atom_count() {
        if a == target {
            origin.extend((0..parts).map(|p| (a, Some(p))));
        } else {
            origin.push((a, None));
        }
    }
    let base = r.names()[target].replace(':', "");
    let names: Vec<String> = origin.iter().map(|&(a, copy)| copy.map_or_else(|| r.names()[a].clone(), |p| format!("{base}:{p}"))).collect();
    let new_index = |a: usize| origin.iter().position(|&(o, c)| o == a && c.is_none()).expect("unsplit atom");
    let identity: BTreeSet<usize> = r.identity().iter().map(|&e| new_index(e)).collect();
    let converse: Vec<usize> = origin.iter().enumerate().map(|(x, &(a, copy))| if copy.is_some() { x } else { new_index(r.converse(a)) }).collect();
    let k = origin.len();
    let mut forbidden = BTreeSet::new();
    for x in 0..k {
        for y in 0..k {
            for z in 0..k {
                let t = [x, y, z];
                let lifted = t.map(|v| origin[v].0);
                let allowed = if let Some(e) = t.iter().position(|v| identity.contains(v)) {
                    let others: Vec<usize> = (0..3).filter(|&p| p != e).map(|p| t[p]).collect();
                    let split_pair_differs = others.iter().all(|&v| origin[v].1.is_some()) && others[0] != others[1];
                    !split_pair_differs && r.consistent(lifted[0], lifted[1], lifted[2])
                } else {
                    r.consistent(lifted[0], lifted[1], lifted[2])
                };
                if !allowed {
                    forbidden.insert(t);
                }
            }
        }
    }
    RaAtomStructure::new(names, identity, converse, forbidden)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{make_graph, GraphKind};
    use crate::monk::ra::check_ra_atom_structure;

    #[test]
    fn alpha_of_triangle_is_an_atom_structure() {
        let g = make_graph(GraphKind::Complete(3)).unwrap();
        let r = alpha_of_graph(&g, 3).unwrap();
        assert_eq!(r.atom_count(), 10);
        let report = check_ra_atom_structure(&r);
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn alpha_forbids_monochromatic_independent_triangles() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let r = alpha_of_graph(&g, 2).unwrap();
        let at = |s: &str| r.atom(s).unwrap();
        assert!(!r.consistent(at("0:0"), at("2:0"), at("2:0")));
        assert!(r.consistent(at("0:0"), at("1:0"), at("2:0")));
        assert!(r.consistent(at("0:0"), at("0:1"), at("0:0")));
        assert!(!r.consistent(at("Id"), at("0:0"), at("0:1")));
        assert!(r.consistent(at("Id"), at("0:0"), at("0:0")));
    }

    #[test]
    fn rybh_passes_the_checker() {
        for levels in 1..=3 {
            let report = check_ra_atom_structure(&rybh_algebra(levels).unwrap());
            assert!(report.all_passed(), "levels {levels}: {report:?}");
        }
    }

    #[test]
    fn single_split_is_a_renaming() {
        let r = rybh_algebra(1).unwrap();
        let s = split_atom(&r, r.atom("r:0").unwrap(), 1).unwrap();
        let renamed: BTreeSet<[String; 3]> =
            s.forbidden_names().into_iter().map(|t| t.map(|n| if n == "r0:0" { "r:0".to_string() } else { n })).collect();
        assert_eq!(renamed, r.forbidden_names());
    }

    #[test]
    fn split_rejects_identity_and_zero_parts() {
        let r = rybh_algebra(1).unwrap();
        assert!(split_atom(&r, 0, 2).is_err());
        assert!(split_atom(&r, 1, 0).is_err());
    }

    #[test]
    fn split_structures_stay_atom_structures() {
        for parts in 1..=4 {
            let r = rybh_algebra(2).unwrap();
            let s = split_atom(&r, r.atom("r:0").unwrap(), parts).unwrap();
            assert_eq!(s.atom_count(), r.atom_count() + parts - 1);
            let report = check_ra_atom_structure(&s);
            assert!(report.all_passed(), "parts {parts}: {report:?}");
        }
    }
}
