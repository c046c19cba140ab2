use super::Winner;
use crate::graphs::Graph;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EfResult {
    pub winner: Winner,
    /// Positions stored in the memo table.
    pub positions: usize,
}

/// Pebbled pairs `(left node, right node)`, sorted so pebble identities do not matter.
type Position = Vec<(usize, usize)>;

struct Ef<'a> {
    left: &'a Graph,
    right: &'a Graph,
    pairs: usize,
    memo: HashMap<(Position, usize), bool>,
}

impl Ef<'_> {
    fn partial_iso(&self, pos: &Position) -> bool {
        pos.iter()
            .enumerate()
            .all(|(p, &(a, b))| pos[..p].iter().all(|&(c, d)| (a == c) == (b == d) && self.left.has_edge(a, c) == self.right.has_edge(b, d)))
    }

    fn exists_wins(&mut self, pos: &Position, rounds: usize) -> bool {
        if rounds == 0 {
            return true;
        }
        if let Some(&w) = self.memo.get(&(pos.clone(), rounds)) {
            return w;
        }
        // ∀ places a fresh pair, or lifts pair `j` and places it again.
        let mut lifts: Vec<Option<usize>> = (0..pos.len()).map(Some).collect();
        if pos.len() < self.pairs {
            lifts.insert(0, None);
        }
        let mut result = true;
        'forall: for lift in lifts {
            let mut base = pos.clone();
            if let Some(j) = lift {
                base.remove(j);
            }
            for a in 0..self.left.node_count() {
                let answered = (0..self.right.node_count()).any(|b| {
                    let mut next = base.clone();
                    next.push((a, b));
                    next.sort_unstable();
                    self.partial_iso(&next) && self.exists_wins(&next, rounds - 1)
                });
                if !answered {
                    result = false;
                    break 'forall;
                }
            }
        }
        self.memo.insert((pos.clone(), rounds), result);
        result
    }
}

/// The forth-only pebble game with `pairs` pairs of pebbles and `rounds` rounds: ∀ pebbles
/// nodes of `left`, ∃ answers in `right` and must keep the pebbled map a partial isomorphism.
pub fn ef_game(left: &Graph, right: &Graph, pairs: usize, rounds: usize) -> EfResult {
    let mut game = Ef { left, right, pairs, memo: HashMap::new() };
    let exists = pairs == 0 || game.exists_wins(&Vec::new(), rounds);
    EfResult { winner: if exists { Winner::Exists } else { Winner::Forall }, positions: game.memo.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{make_graph, GraphKind};
    use proptest::prelude::*;

    #[test]
    fn larger_clique_beats_smaller_with_enough_pebbles() {
        for n in 2..=4 {
            let big = make_graph(GraphKind::Complete(n + 1)).unwrap();
            let small = make_graph(GraphKind::Complete(n)).unwrap();
            assert_eq!(ef_game(&big, &small, n + 1, n + 1).winner, Winner::Forall, "n = {n}");
            assert_eq!(ef_game(&big, &small, n + 1, n - 1).winner, Winner::Exists, "n = {n}");
            assert_eq!(ef_game(&big, &small, n, 6).winner, Winner::Exists, "n = {n} with n pebbles");
        }
    }

    #[test]
    fn cycles_of_different_length() {
        let c5 = make_graph(GraphKind::Cycle(5)).unwrap();
        let c6 = make_graph(GraphKind::Cycle(6)).unwrap();
        // A triangle-free 5-cycle against a 6-cycle: three pebbles find the odd cycle eventually.
        assert_eq!(ef_game(&c5, &c6, 3, 8).winner, Winner::Forall);
        assert_eq!(ef_game(&c5, &c6, 2, 8).winner, Winner::Exists);
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        (1usize..=5).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let edges = (0..n).flat_map(|b| (0..b).map(move |a| (a, b))).zip(bits).filter(|(_, keep)| *keep).map(|(e, _)| e);
                Graph::new(n, edges.collect::<Vec<_>>()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn identical_graphs_are_exists_wins(g in small_graph(), pairs in 1usize..=3, rounds in 0usize..=4) {
            prop_assert_eq!(ef_game(&g, &g, pairs, rounds).winner, Winner::Exists);
        }
    }
}
