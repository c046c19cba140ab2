//! Finite simple graphs, the generators used by Monk-style constructions, and
//! exact chromatic number / girth.

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

/// An irreflexive symmetric graph on `0..node_count`, edges stored as `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    node_count: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Complete(usize),
    Cycle(usize),
    CliqueUnion {
        count: usize,
        size: usize,
    },
    /// Nodes `0..nodes`, edges between `i` and `j` when `0 < |i - j| < width`.
    Band {
        nodes: usize,
        width: usize,
    },
}

impl Graph {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(node_count: usize, edges: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return invalid(format!("self-loop at node {a}"));
            }
            if a >= node_count || b >= node_count {
                return invalid(format!("edge ({a},{b}) out of range for {node_count} nodes"));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        Ok(Graph { node_count, edges: set, adjacency })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbours(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    /// Relabels nodes: node `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        let mut seen = vec![false; self.node_count];
        if perm.len() != self.node_count || perm.iter().any(|&p| p >= self.node_count || std::mem::replace(&mut seen[p], true)) {
            return invalid("relabelling is not a permutation of the nodes");
        }
        Graph::new(self.node_count, self.edges().map(|(a, b)| (perm[a], perm[b])))
    }

    /// DOT text, one line per edge.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in (0..self.node_count).filter(|&v| self.adjacency[v].is_empty()) {
            out.push_str(&format!("  {v};\n"));
        }
        for (a, b) in self.edges() {
            out.push_str(&format!("  {a} -- {b};\n"));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson { nodes: self.node_count, edges: self.edges().map(|(a, b)| [a, b]).collect() }
    }

    pub fn from_json(json: &GraphJson) -> Result<Graph> {
        Graph::new(json.nodes, json.edges.iter().map(|e| (e[0], e[1])))
    }
}

/// Serialized graph: `{"nodes": n, "edges": [[i, j], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: usize,
    pub edges: Vec<[usize; 2]>,
}

pub fn make_graph(kind: GraphKind) -> Result<Graph> {
    match kind {
        GraphKind::Complete(n) => {
            positive(&[n])?;
            Graph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
        }
        GraphKind::Cycle(k) => {
            positive(&[k])?;
            if k < 3 {
                return invalid(format!("cycle needs at least 3 nodes, got {k}"));
            }
            Graph::new(k, (0..k).map(|v| (v, (v + 1) % k)))
        }
        GraphKind::CliqueUnion { count, size } => {
            positive(&[count, size])?;
            Graph::new(
                count * size,
                (0..count).flat_map(|c| {
                    let base = c * size;
                    (0..size).flat_map(move |a| (a + 1..size).map(move |b| (base + a, base + b)))
                }),
            )
        }
        GraphKind::Band { nodes, width } => {
            positive(&[nodes, width])?;
            Graph::new(nodes, (0..nodes).flat_map(|a| (a + 1..nodes.min(a + width)).map(move |b| (a, b))))
        }
    }
}

fn positive(params: &[usize]) -> Result<()> {
    if params.contains(&0) {
        return invalid("graph size parameters must be at least 1");
    }
    Ok(())
}

impl std::str::FromStr for GraphKind {
    type Err = crate::error::Error;

    /// Parses `complete:n`, `cycle:k`, `cliques:count,size` or `band:M,N`.
    fn from_str(text: &str) -> Result<Self> {
        let (name, args) = text.split_once(':').unwrap_or((text, ""));
        let nums: Vec<usize> = args
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| crate::error::Error::InvalidArgument(format!("bad graph parameter in {text:?}: {e}")))?;
        match (name, nums.as_slice()) {
            ("complete", [n]) => Ok(GraphKind::Complete(*n)),
            ("cycle", [k]) => Ok(GraphKind::Cycle(*k)),
            ("cliques" | "clique_union", [c, s]) => Ok(GraphKind::CliqueUnion { count: *c, size: *s }),
            ("band", [m, n]) => Ok(GraphKind::Band { nodes: *m, width: *n }),
            _ => invalid(format!("unknown graph spec {text:?}")),
        }
    }
}

/// Shortest cycle length, or infinity for forests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(n) => write!(f, "{n}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(n) => s.serialize_u64(*n as u64),
            Girth::Infinite => s.serialize_str("inf"),
        }
    }
}

pub fn girth(g: &Graph) -> Girth {
    let mut best = usize::MAX;
    for root in 0..g.node_count() {
        let mut dist = vec![usize::MAX; g.node_count()];
        let mut parent = vec![usize::MAX; g.node_count()];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbours(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                } else if parent[v] != w {
                    best = best.min(dist[v] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

pub fn is_colouring<C: PartialEq>(g: &Graph, colouring: &[Option<C>]) -> Result<bool> {
    if colouring.len() != g.node_count() || colouring.iter().any(Option::is_none) {
        return invalid("colouring must assign a colour to every node");
    }
    Ok(g.edges().all(|(a, b)| colouring[a] != colouring[b]))
}

/// Exact chromatic number together with an optimal colouring.
pub fn optimal_colouring(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.node_count();
    if n == 0 {
        return (0, Vec::new());
    }
    // Highest degree first tends to fail fast.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.neighbours(v).len()), v));
    let greedy = greedy_colouring(g, &order);
    let mut best_count = greedy.iter().max().map_or(0, |&c| c + 1);
    let mut best = greedy;
    let mut current = vec![usize::MAX; n];
    search(g, &order, 0, 0, &mut current, &mut best_count, &mut best);
    (best_count, best)
}

pub fn chromatic_number(g: &Graph) -> usize {
    optimal_colouring(g).0
}

fn greedy_colouring(g: &Graph, order: &[usize]) -> Vec<usize> {
    let mut colour = vec![usize::MAX; g.node_count()];
    for &v in order {
        let used: BTreeSet<usize> = g.neighbours(v).iter().map(|&w| colour[w]).collect();
        colour[v] = (0..).find(|c| !used.contains(c)).unwrap_or(0);
    }
    colour
}

fn search(g: &Graph, order: &[usize], depth: usize, used: usize, current: &mut [usize], best_count: &mut usize, best: &mut Vec<usize>) {
    if used >= *best_count {
        return;
    }
    if depth == order.len() {
        *best_count = used;
        best.copy_from_slice(current);
        return;
    }
    let v = order[depth];
    // Opening a fresh colour beyond `used` is symmetric, so only one new colour is tried.
    for c in 0..=used.min(*best_count - 1) {
        if g.neighbours(v).iter().any(|&w| current[w] == c) {
            continue;
        }
        current[v] = c;
        search(g, order, depth + 1, used.max(c + 1), current, best_count, best);
        current[v] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force_chromatic(g: &Graph) -> usize {
        let n = g.node_count();
        (0..=n)
            .find(|&k| {
                if k == 0 {
                    return n == 0;
                }
                let total = k.pow(n as u32);
                (0..total).any(|mut code| {
                    let colours: Vec<Option<usize>> = (0..n)
                        .map(|_| {
                            let c = code % k;
                            code /= k;
                            Some(c)
                        })
                        .collect();
                    is_colouring(g, &colours).unwrap()
                })
            })
            .unwrap()
    }

    fn bfs_girth_oracle(g: &Graph) -> Option<usize> {
        // Shortest cycle through each edge: remove it and measure the distance between its ends.
        g.edges()
            .filter_map(|(a, b)| {
                let rest = Graph::new(g.node_count(), g.edges().filter(|&e| e != (a, b))).unwrap();
                let mut dist = vec![usize::MAX; g.node_count()];
                dist[a] = 0;
                let mut queue = VecDeque::from([a]);
                while let Some(v) = queue.pop_front() {
                    for &w in rest.neighbours(v) {
                        if dist[w] == usize::MAX {
                            dist[w] = dist[v] + 1;
                            queue.push_back(w);
                        }
                    }
                }
                (dist[b] != usize::MAX).then(|| dist[b] + 1)
            })
            .min()
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
                Graph::new(n, pairs.zip(bits).filter(|(_, keep)| *keep).map(|(e, _)| e)).unwrap()
            })
        })
    }

    #[test]
    fn generators() {
        assert_eq!(make_graph(GraphKind::Complete(3)).unwrap().edge_count(), 3);
        let cliques = make_graph(GraphKind::CliqueUnion { count: 2, size: 3 }).unwrap();
        assert_eq!((cliques.node_count(), cliques.edge_count()), (6, 6));
        assert!(!cliques.has_edge(2, 3));
        let band = make_graph(GraphKind::Band { nodes: 6, width: 2 }).unwrap();
        let expected: Vec<(usize, usize)> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).filter(|&(a, b)| b - a < 2).collect();
        assert_eq!(band.edges().collect::<Vec<_>>(), expected);
        assert!(make_graph(GraphKind::Complete(0)).is_err());
        assert!(make_graph(GraphKind::Band { nodes: 4, width: 0 }).is_err());
    }

    #[test]
    fn chromatic_examples() {
        for n in 1..=6 {
            assert_eq!(chromatic_number(&make_graph(GraphKind::Complete(n)).unwrap()), n);
        }
        assert_eq!(chromatic_number(&make_graph(GraphKind::CliqueUnion { count: 4, size: 3 }).unwrap()), 3);
        let c5 = make_graph(GraphKind::Cycle(5)).unwrap();
        assert_eq!(chromatic_number(&c5), brute_force_chromatic(&c5));
        assert_eq!(chromatic_number(&c5), 3);
        assert_eq!(chromatic_number(&Graph::new(0, []).unwrap()), 0);
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&make_graph(GraphKind::Complete(3)).unwrap()), Girth::Finite(3));
        assert_eq!(girth(&make_graph(GraphKind::Band { nodes: 6, width: 2 }).unwrap()), Girth::Infinite);
        let c7 = make_graph(GraphKind::Cycle(7)).unwrap();
        assert_eq!(bfs_girth_oracle(&c7), Some(7));
        assert_eq!(girth(&c7), Girth::Finite(7));
        assert_eq!(serde_json::to_string(&Girth::Infinite).unwrap(), "\"inf\"");
        for size in 1..=4 {
            let g = make_graph(GraphKind::CliqueUnion { count: 3, size }).unwrap();
            let expected = if size >= 3 { Girth::Finite(3) } else { Girth::Infinite };
            assert_eq!(girth(&g), expected);
        }
    }

    #[test]
    fn colouring_checks() {
        let k2 = make_graph(GraphKind::Complete(2)).unwrap();
        assert!(is_colouring(&k2, &[Some('a'), Some('b')]).unwrap());
        assert!(!is_colouring(&k2, &[Some('a'), Some('a')]).unwrap());
        assert!(is_colouring(&k2, &[Some('a'), None]).is_err());
        let c5 = make_graph(GraphKind::Cycle(5)).unwrap();
        for mask in 0u32..32 {
            let colours: Vec<Option<u32>> = (0..5).map(|v| Some(mask >> v & 1)).collect();
            assert!(!is_colouring(&c5, &colours).unwrap());
        }
    }

    #[test]
    fn dot_and_json() {
        let g = make_graph(GraphKind::Complete(3)).unwrap();
        assert_eq!(g.to_dot(), "graph G {\n  0 -- 1;\n  0 -- 2;\n  1 -- 2;\n}\n");
        let json = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(json, r#"{"nodes":3,"edges":[[0,1],[0,2],[1,2]]}"#);
        let back: GraphJson = serde_json::from_str(&json).unwrap();
        assert_eq!(Graph::from_json(&back).unwrap(), g);
        assert_eq!("band:6,2".parse::<GraphKind>().unwrap(), GraphKind::Band { nodes: 6, width: 2 });
    }

    proptest! {
        #[test]
        fn chromatic_matches_brute_force(g in arb_graph()) {
            let (k, colouring) = optimal_colouring(&g);
            prop_assert_eq!(k, brute_force_chromatic(&g));
            let colours: Vec<Option<usize>> = colouring.iter().copied().map(Some).collect();
            prop_assert!(is_colouring(&g, &colours).unwrap());
            prop_assert_eq!(colouring.iter().collect::<BTreeSet<_>>().len(), k);
        }

        #[test]
        fn chromatic_invariant_under_relabelling(g in arb_graph(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut perm: Vec<usize> = (0..g.node_count()).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(chromatic_number(&g), chromatic_number(&g.permuted(&perm).unwrap()));
        }

        #[test]
        fn girth_matches_edge_removal_oracle(g in arb_graph()) {
            let expected = bfs_girth_oracle(&g).map_or(Girth::Infinite, Girth::Finite);
            prop_assert_eq!(girth(&g), expected);
        }
    }
}
