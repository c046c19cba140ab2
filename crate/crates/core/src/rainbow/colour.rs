use crate::error::{invalid, Error, Result};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::graph::ColouredGraph;

/// Edge colours. Reds are oriented: `Red(k, l)` on the edge `p -> q` gives `p` the red
/// index `k` and `q` the index `l`; its converse is `Red(l, k)`. All other colours are
/// self-converse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Colour {
    /// `g_i` for `1 <= i <= n - 2`.
    Green(usize),
    /// `g_0^t`, the green tinted by `t` from the green index set.
    GreenZero(i64),
    /// `w_i` for `i <= n - 2`.
    White(usize),
    Red(i64, i64),
}

impl Colour {
    pub fn converse(self) -> Colour {
        match self {
            Colour::Red(k, l) => Colour::Red(l, k),
            other => other,
        }
    }

    pub fn is_green(self) -> bool {
        matches!(self, Colour::Green(_) | Colour::GreenZero(_))
    }

    pub fn is_red(self) -> bool {
        matches!(self, Colour::Red(..))
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colour::Green(i) => write!(f, "g:{i}"),
            Colour::GreenZero(t) => write!(f, "g0:{t}"),
            Colour::White(i) => write!(f, "w:{i}"),
            Colour::Red(k, l) => write!(f, "r:{k},{l}"),
        }
    }
}

impl FromStr for Colour {
    type Err = Error;

    fn from_str(text: &str) -> Result<Colour> {
        let bad = || Error::InvalidArgument(format!("unknown colour {text:?}"));
        let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
        match kind {
            "g" => rest.parse().map(Colour::Green).map_err(|_| bad()),
            "g0" => rest.parse().map(Colour::GreenZero).map_err(|_| bad()),
            "w" => rest.parse().map(Colour::White).map_err(|_| bad()),
            "r" => {
                let (k, l) = rest.split_once(',').ok_or_else(bad)?;
                Ok(Colour::Red(k.parse().map_err(|_| bad())?, l.parse().map_err(|_| bad())?))
            }
            _ => Err(bad()),
        }
    }
}

/// Decides which coloured graphs carrying yellow hyperedge labels are admissible.
pub type YellowRule = Arc<dyn Fn(&ColouredGraph) -> bool + Send + Sync>;

/// The colour inventory of a rainbow construction of dimension `n`.
#[derive(Clone)]
pub struct RainbowSig {
    n: usize,
    green_tints: Vec<i64>,
    red_indices: Vec<i64>,
    yellow_shades: usize,
    ordered: bool,
    yellow_rule: Option<YellowRule>,
}

impl fmt::Debug for RainbowSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RainbowSig")
            .field("n", &self.n)
            .field("green_tints", &self.green_tints)
            .field("red_indices", &self.red_indices)
            .field("yellow_shades", &self.yellow_shades)
            .field("ordered", &self.ordered)
            .finish()
    }
}

impl RainbowSig {
    /// Green tints `0..greens` and red indices `0..reds`.
    pub fn new(n: usize, greens: usize, reds: usize) -> Result<Self> {
        Self::build(n, (0..greens as i64).collect(), (0..reds as i64).collect(), false)
    }

    /// Integer windows for tints and red indices, with the order-preserving rule switched on.
    pub fn ordered(n: usize, tints: std::ops::RangeInclusive<i64>, reds: std::ops::RangeInclusive<i64>) -> Result<Self> {
        Self::build(n, tints.collect(), reds.collect(), true)
    }

    fn build(n: usize, green_tints: Vec<i64>, red_indices: Vec<i64>, ordered: bool) -> Result<Self> {
        if n < 2 {
            return invalid("rainbow dimension must be at least 2");
        }
        Ok(RainbowSig { n, green_tints, red_indices, yellow_shades: 0, ordered, yellow_rule: None })
    }

    /// Adds `shades` yellow labels for `(n-1)`-sets of nodes, filtered by `rule` (all graphs allowed when `None`).
    pub fn with_yellows(mut self, shades: usize, rule: Option<YellowRule>) -> Self {
        self.yellow_shades = shades;
        self.yellow_rule = rule;
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn green_tints(&self) -> &[i64] {
        &self.green_tints
    }

    pub fn red_indices(&self) -> &[i64] {
        &self.red_indices
    }

    pub fn yellow_shades(&self) -> usize {
        self.yellow_shades
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    pub(crate) fn yellow_allows(&self, graph: &ColouredGraph) -> bool {
        self.yellow_rule.as_ref().is_none_or(|rule| rule(graph))
    }

    /// Every edge colour, in canonical order.
    pub fn colours(&self) -> Vec<Colour> {
        let n = self.n;
        let mut out: Vec<Colour> = (1..n.saturating_sub(1)).map(Colour::Green).collect();
        out.extend(self.green_tints.iter().map(|&t| Colour::GreenZero(t)));
        out.extend((0..n - 1).map(Colour::White));
        for &k in &self.red_indices {
            out.extend(self.red_indices.iter().filter(|&&l| l != k).map(|&l| Colour::Red(k, l)));
        }
        out.sort();
        out
    }

    pub fn contains(&self, colour: Colour) -> bool {
        match colour {
            Colour::Green(i) => (1..self.n - 1).contains(&i),
            Colour::GreenZero(t) => self.green_tints.contains(&t),
            Colour::White(i) => i < self.n - 1,
            Colour::Red(k, l) => k != l && self.red_indices.contains(&k) && self.red_indices.contains(&l),
        }
    }

    /// Whether the triangle `x, y, z` with `c1 = (x, y)`, `c2 = (y, z)`, `c3 = (x, z)` is forbidden.
    pub fn is_forbidden_triple(&self, c1: Colour, c2: Colour, c3: Colour) -> Result<bool> {
        for c in [c1, c2, c3] {
            if !self.contains(c) {
                return invalid(format!("colour {c} is not in the signature"));
            }
        }
        Ok(self.forbidden(c1, c2, c3))
    }

    pub(crate) fn forbidden(&self, c1: Colour, c2: Colour, c3: Colour) -> bool {
        let triple = [c1, c2, c3];
        if triple.iter().all(|c| c.is_green()) {
            return true;
        }
        let mut sorted = triple;
        sorted.sort();
        // Multiset patterns; the sort puts greens before whites.
        if let [Colour::Green(a), Colour::Green(b), Colour::White(c)] = sorted {
            if a == b && b == c {
                return true;
            }
        }
        if let [Colour::GreenZero(_), Colour::GreenZero(_), Colour::White(0)] = sorted {
            return true;
        }
        if let [Colour::Red(i, j), Colour::Red(j2, k2), Colour::Red(i2, k)] = triple {
            if !(i == i2 && j == j2 && k2 == k) {
                return true;
            }
        }
        if self.ordered && !order_preserving(triple) {
            return true;
        }
        false
    }
}

/// For two tinted greens and one red: the tint/red-index pairs at the red edge's two ends
/// must form a strictly order-preserving map. Other shapes pass.
fn order_preserving(triple: [Colour; 3]) -> bool {
    // Oriented edges of the triangle on nodes x = 0, y = 1, z = 2.
    let edges = [(0, 1, triple[0]), (1, 2, triple[1]), (0, 2, triple[2])];
    let reds: Vec<(usize, usize, i64, i64)> =
        edges.iter().filter_map(|&(u, v, c)| if let Colour::Red(k, l) = c { Some((u, v, k, l)) } else { None }).collect();
    let tints: Vec<(usize, usize, i64)> =
        edges.iter().filter_map(|&(u, v, c)| if let Colour::GreenZero(t) = c { Some((u, v, t)) } else { None }).collect();
    let (&[(u, v, k, l)], 2) = (reds.as_slice(), tints.len()) else {
        return true;
    };
    let tint_at = |node: usize| tints.iter().find(|e| e.0 == node || e.1 == node).map(|e| e.2).expect("each red end meets one tinted green");
    let (tu, tv) = (tint_at(u), tint_at(v));
    tu.cmp(&tv) == k.cmp(&l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn listed_patterns() {
        let sig = RainbowSig::new(3, 4, 3).unwrap();
        assert!(sig.is_forbidden_triple(Colour::Green(1), Colour::Green(1), Colour::White(1)).unwrap());
        assert!(sig.is_forbidden_triple(Colour::GreenZero(0), Colour::White(0), Colour::GreenZero(2)).unwrap());
        assert!(sig.is_forbidden_triple(Colour::GreenZero(0), Colour::Green(1), Colour::GreenZero(2)).unwrap());
        assert!(!sig.is_forbidden_triple(Colour::Red(0, 1), Colour::Red(1, 2), Colour::Red(0, 2)).unwrap());
        assert!(sig.is_forbidden_triple(Colour::Red(0, 1), Colour::Red(2, 1), Colour::Red(0, 2)).unwrap());
        assert!(!sig.is_forbidden_triple(Colour::GreenZero(0), Colour::GreenZero(1), Colour::Red(0, 1)).unwrap());
        assert!(sig.is_forbidden_triple(Colour::Red(0, 0), Colour::White(0), Colour::White(0)).is_err());
        assert!(sig.is_forbidden_triple(Colour::GreenZero(9), Colour::White(0), Colour::White(0)).is_err());
    }

    #[test]
    fn ordered_rule() {
        let sig = RainbowSig::ordered(3, -3..=0, 0..=3).unwrap();
        // x - y red r(k, l); y - z tint 0 at y, x - z tint -1 at x.
        let (g_minus, g_zero) = (Colour::GreenZero(-1), Colour::GreenZero(0));
        assert!(sig.is_forbidden_triple(Colour::Red(2, 1), g_zero, g_minus).unwrap());
        assert!(!sig.is_forbidden_triple(Colour::Red(1, 2), g_zero, g_minus).unwrap());
        // Equal tints cannot be matched to distinct red indices.
        assert!(sig.is_forbidden_triple(Colour::Red(1, 2), g_zero, g_zero).unwrap());
        let plain = RainbowSig::new(3, 2, 3).unwrap();
        assert!(!plain.is_forbidden_triple(Colour::Red(1, 0), Colour::GreenZero(0), Colour::GreenZero(1)).unwrap());
    }

    #[test]
    fn colour_names_round_trip() {
        let sig = RainbowSig::new(4, 2, 3).unwrap();
        for c in sig.colours() {
            assert_eq!(c.to_string().parse::<Colour>().unwrap(), c);
        }
        assert_eq!(sig.colours().len(), 2 + 2 + 3 + 6);
    }

    fn permute(triple: [Colour; 3], perm: [usize; 3]) -> [Colour; 3] {
        // Label of the oriented edge between triangle nodes.
        let label = |a: usize, b: usize| -> Colour {
            match (a, b) {
                (0, 1) => triple[0],
                (1, 2) => triple[1],
                (0, 2) => triple[2],
                (1, 0) => triple[0].converse(),
                (2, 1) => triple[1].converse(),
                (2, 0) => triple[2].converse(),
                _ => unreachable!(),
            }
        };
        [label(perm[0], perm[1]), label(perm[1], perm[2]), label(perm[0], perm[2])]
    }

    proptest! {
        #[test]
        fn predicate_is_invariant_under_node_permutations(ordered in any::<bool>(), a in 0usize..40, b in 0usize..40, c in 0usize..40) {
            let sig = if ordered { RainbowSig::ordered(4, -2..=1, 0..=2).unwrap() } else { RainbowSig::new(4, 3, 3).unwrap() };
            let colours = sig.colours();
            let triple = [colours[a % colours.len()], colours[b % colours.len()], colours[c % colours.len()]];
            let expected = sig.forbidden(triple[0], triple[1], triple[2]);
            for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                let p = permute(triple, perm);
                prop_assert_eq!(sig.forbidden(p[0], p[1], p[2]), expected);
            }
        }
    }
}
