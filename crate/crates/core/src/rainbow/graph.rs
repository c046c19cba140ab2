use super::colour::{Colour, RainbowSig};
use crate::error::{invalid, Result};
use std::collections::BTreeMap;

/// A graph whose edges carry rainbow colours and whose `(n-1)`-sets of nodes may carry a
/// yellow shade. Edge labels are stored oriented from the smaller node to the larger.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColouredGraph {
    node_count: usize,
    labels: Vec<Option<Colour>>,
    yellows: BTreeMap<Vec<usize>, usize>,
}

fn slot(p: usize, q: usize) -> usize {
    q * (q - 1) / 2 + p
}

impl ColouredGraph {
    pub fn new(node_count: usize) -> Self {
        ColouredGraph { node_count, labels: vec![None; node_count * node_count.saturating_sub(1) / 2], yellows: BTreeMap::new() }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Colours the edge `p -> q`; the reverse direction reads as the converse.
    pub fn set(&mut self, p: usize, q: usize, colour: Colour) -> Result<()> {
        if p == q || p >= self.node_count || q >= self.node_count {
            return invalid(format!("no edge ({p},{q}) in a graph on {} nodes", self.node_count));
        }
        let (slot_index, stored) = if p < q { (slot(p, q), colour) } else { (slot(q, p), colour.converse()) };
        self.labels[slot_index] = Some(stored);
        Ok(())
    }

    pub fn label(&self, p: usize, q: usize) -> Option<Colour> {
        match p.cmp(&q) {
            std::cmp::Ordering::Less => self.labels[slot(p, q)],
            std::cmp::Ordering::Greater => self.labels[slot(q, p)].map(Colour::converse),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn set_yellow(&mut self, mut nodes: Vec<usize>, shade: usize) {
        nodes.sort_unstable();
        self.yellows.insert(nodes, shade);
    }

    pub fn yellow(&self, nodes: &[usize]) -> Option<usize> {
        let mut key = nodes.to_vec();
        key.sort_unstable();
        self.yellows.get(&key).copied()
    }

    pub fn yellows(&self) -> &BTreeMap<Vec<usize>, usize> {
        &self.yellows
    }

    pub fn is_complete(&self) -> bool {
        self.labels.iter().all(Option::is_some)
    }

    /// The first labelled triangle `(x, y, z)` that the signature forbids.
    pub fn forbidden_triangle(&self, sig: &RainbowSig) -> Option<(usize, usize, usize)> {
        let k = self.node_count;
        for z in 0..k {
            for y in 0..z {
                for x in 0..y {
                    if let (Some(a), Some(b), Some(c)) = (self.label(x, y), self.label(y, z), self.label(x, z)) {
                        if sig.forbidden(a, b, c) {
                            return Some((x, y, z));
                        }
                    }
                }
            }
        }
        None
    }

    /// Every label from the signature, every labelled triangle allowed, and the yellow rule satisfied.
    pub fn is_consistent(&self, sig: &RainbowSig) -> bool {
        self.labels.iter().flatten().all(|&c| sig.contains(c))
            && self.yellows.values().all(|&s| s < sig.yellow_shades())
            && self.forbidden_triangle(sig).is_none()
            && sig.yellow_allows(self)
    }

    /// The subgraph on `nodes`, renumbered in the given order.
    pub fn induced(&self, nodes: &[usize]) -> ColouredGraph {
        let mut out = ColouredGraph::new(nodes.len());
        for (q, &b) in nodes.iter().enumerate() {
            for (p, &a) in nodes[..q].iter().enumerate() {
                out.labels[slot(p, q)] = self.label(a, b);
            }
        }
        let position: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for (set, &shade) in &self.yellows {
            if let Some(mapped) = set.iter().map(|v| position.get(v).copied()).collect::<Option<Vec<usize>>>() {
                out.set_yellow(mapped, shade);
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for q in 0..self.node_count {
            for p in 0..q {
                if let Some(c) = self.labels[slot(p, q)] {
                    let colour = match c {
                        Colour::Green(_) | Colour::GreenZero(_) => "green",
                        Colour::White(_) => "gray",
                        Colour::Red(..) => "red",
                    };
                    out.push_str(&format!("  {p} -> {q} [label=\"{c}\", color={colour}, arrowhead=none];\n"));
                }
            }
        }
        for (set, shade) in &self.yellows {
            let members: Vec<String> = set.iter().map(usize::to_string).collect();
            out.push_str(&format!("  // y:{shade} on {{{}}}\n", members.join(",")));
        }
        out.push_str("}\n");
        out
    }
}
