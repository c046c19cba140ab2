use super::colour::{Colour, RainbowSig};
use super::graph::ColouredGraph;
use crate::error::{invalid, Result};

/// The `tint`-cone over a base of `n - 1` nodes: apex `n - 1` joined to base node 0 by
/// `g_0^tint` and to base node `j` by `g_j`.
pub fn cone(sig: &RainbowSig, base: &ColouredGraph, tint: i64) -> Result<ColouredGraph> {
    let n = sig.dim();
    if base.node_count() != n - 1 {
        return invalid(format!("cone base needs {} nodes, got {}", n - 1, base.node_count()));
    }
    if !sig.green_tints().contains(&tint) {
        return invalid(format!("tint {tint} is not a green index"));
    }
    let mut out = ColouredGraph::new(n);
    for q in 0..n - 1 {
        for p in 0..q {
            match base.label(p, q) {
                Some(c) if c.is_green() => return invalid("cone base must not contain green edges"),
                Some(c) => out.set(p, q, c)?,
                None => return invalid(format!("cone base edge ({p},{q}) is unlabelled")),
            }
        }
    }
    for (set, &shade) in base.yellows() {
        out.set_yellow(set.clone(), shade);
    }
    out.set(0, n - 1, Colour::GreenZero(tint))?;
    for j in 1..n - 1 {
        out.set(j, n - 1, Colour::Green(j))?;
    }
    if !out.is_consistent(sig) {
        return invalid("cone over this base is inconsistent");
    }
    Ok(out)
}

/// The base all of whose edges are `w_0`.
pub fn white_base(sig: &RainbowSig) -> ColouredGraph {
    let k = sig.dim() - 1;
    let mut base = ColouredGraph::new(k);
    for q in 0..k {
        for p in 0..q {
            base.set(p, q, Colour::White(0)).expect("in range");
        }
    }
    base
}

/// Labels that the edge between the apexes of two cones on the same base can take
/// while keeping the combined `n + 1`-node graph consistent. Apexes are `n - 1` and `n`.
pub fn apex_edge_options(sig: &RainbowSig, base: &ColouredGraph, first: i64, second: i64) -> Result<Vec<Colour>> {
    let n = sig.dim();
    let a = cone(sig, base, first)?;
    let b = cone(sig, base, second)?;
    let mut joint = ColouredGraph::new(n + 1);
    for q in 0..n {
        for p in 0..q {
            if let Some(c) = a.label(p, q) {
                joint.set(p, q, c)?;
            }
        }
    }
    for p in 0..n - 1 {
        joint.set(p, n, b.label(p, n - 1).expect("cone is complete"))?;
    }
    let mut options = Vec::new();
    for c in sig.colours() {
        joint.set(n - 1, n, c)?;
        if joint.forbidden_triangle(sig).is_none() {
            options.push(c);
        }
    }
    Ok(options)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_shape() {
        let sig = RainbowSig::new(4, 3, 2).unwrap();
        let base = white_base(&sig);
        let c = cone(&sig, &base, 0).unwrap();
        let greens = (0..4).flat_map(|q| (0..q).map(move |p| (p, q))).filter(|&(p, q)| c.label(p, q).unwrap().is_green()).count();
        assert_eq!(greens, 3);
        assert!(c.forbidden_triangle(&sig).is_none());
        assert!(cone(&sig, &base, 7).is_err());
        let mut green_base = base.clone();
        green_base.set(0, 1, Colour::Green(1)).unwrap();
        assert!(cone(&sig, &green_base, 0).is_err());
    }

    #[test]
    fn two_cones_force_red() {
        for n in 3..=4 {
            let sig = RainbowSig::new(n, 3, 3).unwrap();
            let options = apex_edge_options(&sig, &white_base(&sig), 0, 1).unwrap();
            assert!(!options.is_empty());
            assert!(options.iter().all(|c| c.is_red()), "n = {n}: {options:?}");
        }
    }

    /// Chains of three cones with decreasing tints: every consistent labelling of the apex
    /// edges gives the newer apex a smaller red index.
    #[test]
    fn ordered_chain_red_indices_decrease() {
        let sig = RainbowSig::ordered(3, -2..=0, 0..=4).unwrap();
        let base = white_base(&sig);
        let tints = [0, -1, -2];
        let mut g = ColouredGraph::new(5);
        g.set(0, 1, Colour::White(0)).unwrap();
        for (k, &t) in tints.iter().enumerate() {
            let apex = 2 + k;
            let c = cone(&sig, &base, t).unwrap();
            g.set(0, apex, c.label(0, 2).unwrap()).unwrap();
            g.set(1, apex, c.label(1, 2).unwrap()).unwrap();
        }
        let colours = sig.colours();
        let mut consistent = 0;
        for a in &colours {
            for b in &colours {
                for c in &colours {
                    let mut h = g.clone();
                    h.set(2, 3, *a).unwrap();
                    h.set(3, 4, *b).unwrap();
                    h.set(2, 4, *c).unwrap();
                    if h.forbidden_triangle(&sig).is_some() {
                        continue;
                    }
                    consistent += 1;
                    let index = |p: usize, q: usize| match h.label(p, q) {
                        Some(Colour::Red(k, _)) => k,
                        other => panic!("apex edge must be red, got {other:?}"),
                    };
                    let (r2, r3, r4) = (index(2, 3), index(3, 4), index(4, 2));
                    assert!(r2 > r3 && r3 > r4);
                }
            }
        }
        assert!(consistent > 0);
    }
}
