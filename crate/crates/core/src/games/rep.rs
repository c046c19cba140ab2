use super::network::{decode_tuple, tuple_code};
use super::Winner;
use crate::algebra::FiniteBao;
use crate::atomset::AtomSet;
use crate::error::{invalid, Error, Result};
use serde::Serialize;
use std::collections::HashMap;

/// A pre-network labelled by algebra elements. Tuples are coded as in atomic networks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ElementNetwork {
    dim: usize,
    nodes: usize,
    labels: Vec<AtomSet>,
}

impl ElementNetwork {
    /// One node whose constant tuple is labelled by the meet of all diagonals.
    pub fn initial(algebra: &FiniteBao) -> Self {
        let n = algebra.dim();
        ElementNetwork { dim: n, nodes: 1, labels: vec![diagonal_meet(algebra, &vec![0; n])] }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn label(&self, tuple: &[usize]) -> &AtomSet {
        &self.labels[tuple_code(self.nodes, tuple)]
    }

    pub fn labels(&self) -> &[AtomSet] {
        &self.labels
    }

    pub fn tuple(&self, code: usize) -> Vec<usize> {
        decode_tuple(self.nodes, self.dim, code)
    }

    /// Both conditions: `N(x) <= d_ij` iff `x_i = x_j`, and `N(x) . c_i N(y) != 0` whenever
    /// `x` and `y` differ at most in coordinate `i`.
    pub fn is_network(&self, algebra: &FiniteBao) -> bool {
        let n = self.dim;
        (0..self.labels.len()).all(|code| {
            let t = self.tuple(code);
            let label = &self.labels[code];
            let diagonal_ok = (0..n).all(|j| (0..j).all(|i| label.is_subset(&algebra.diag(i, j)) == (t[i] == t[j])));
            diagonal_ok
                && (0..n).all(|i| {
                    let mut u = t.clone();
                    (0..self.nodes).all(|w| {
                        u[i] = w;
                        label.intersects(&algebra.cyl(i, self.label(&u)))
                    })
                })
        })
    }

    fn with_new_node(&self, algebra: &FiniteBao) -> ElementNetwork {
        let nodes = self.nodes + 1;
        let labels = (0..nodes.pow(self.dim as u32))
            .map(|code| {
                let t = decode_tuple(nodes, self.dim, code);
                if t.iter().all(|&x| x < self.nodes) {
                    self.label(&t).clone()
                } else {
                    diagonal_meet(algebra, &t)
                }
            })
            .collect();
        ElementNetwork { dim: self.dim, nodes, labels }
    }

    fn set(&mut self, tuple: &[usize], value: AtomSet) {
        let code = tuple_code(self.nodes, tuple);
        self.labels[code] = value;
    }
}

/// The meet of `d_jk` over the coordinate pairs where `tuple` repeats a node.
fn diagonal_meet(algebra: &FiniteBao, tuple: &[usize]) -> AtomSet {
    let mut out = algebra.one();
    for k in 0..tuple.len() {
        for j in 0..k {
            if tuple[j] == tuple[k] {
                out.intersect_with(&algebra.diag(j, k));
            }
        }
    }
    out
}

/// ∀'s challenge: the tuple, the coordinate to vary, and an element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RepMove {
    pub tuple: Vec<usize>,
    pub index: usize,
    pub element: Vec<usize>,
}

/// ∃'s answer. `Accept(Some(w))` reuses node `w` as the witness, a relaxation of the
/// fresh-node rule that lets finite representations close up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepResponse {
    Reject,
    Accept(Option<usize>),
}

fn respond(algebra: &FiniteBao, net: &ElementNetwork, tuple: &[usize], i: usize, a: &AtomSet, response: RepResponse) -> ElementNetwork {
    let ca = algebra.cyl(i, a);
    match response {
        RepResponse::Reject => {
            let mut next = net.clone();
            next.set(tuple, net.label(tuple).difference(&ca));
            next
        }
        RepResponse::Accept(existing) => {
            let mut next = match existing {
                Some(_) => net.clone(),
                None => net.with_new_node(algebra),
            };
            let z = existing.unwrap_or(net.nodes);
            let mut witness = tuple.to_vec();
            witness[i] = z;
            next.set(tuple, net.label(tuple).intersection(&ca));
            let w = next.label(&witness).intersection(a);
            next.set(&witness, w);
            next
        }
    }
}

fn responses(nodes: usize, budget: usize) -> Vec<RepResponse> {
    let mut out: Vec<RepResponse> = (0..nodes).map(|w| RepResponse::Accept(Some(w))).collect();
    if nodes < budget {
        out.push(RepResponse::Accept(None));
    }
    out.push(RepResponse::Reject);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepLimits {
    pub node_budget: usize,
    /// Positions the exact solver may memoize.
    pub max_states: usize,
    /// Search steps the scheduled play may take, backtracking included.
    pub max_steps: usize,
}

impl Default for RepLimits {
    fn default() -> Self {
        RepLimits { node_budget: 4, max_states: 200_000, max_steps: 1_000_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RepResult {
    pub winner: Winner,
    pub rounds: usize,
    pub states: usize,
    /// For a ∀-win, one challenge at the initial network that ∃ cannot survive.
    pub refutation: Option<RepMove>,
}

struct RepSolver<'a> {
    algebra: &'a FiniteBao,
    elements: Vec<AtomSet>,
    limits: RepLimits,
    memo: HashMap<(ElementNetwork, usize), bool>,
}

impl RepSolver<'_> {
    fn moves(&self, net: &ElementNetwork) -> Vec<(Vec<usize>, usize, AtomSet)> {
        let mut out = Vec::new();
        for code in 0..net.labels.len() {
            for i in 0..net.dim {
                for a in &self.elements {
                    out.push((net.tuple(code), i, a.clone()));
                }
            }
        }
        out
    }

    fn survives(&mut self, net: &ElementNetwork, rounds: usize) -> Result<bool> {
        if rounds == 0 {
            return Ok(true);
        }
        if let Some(&w) = self.memo.get(&(net.clone(), rounds)) {
            return Ok(w);
        }
        if self.memo.len() >= self.limits.max_states {
            return Err(Error::ResourceLimit { what: "representation game states".into(), cap: self.limits.max_states });
        }
        let mut result = true;
        for (tuple, i, a) in self.moves(net) {
            let mut answered = false;
            for r in responses(net.nodes, self.limits.node_budget) {
                let next = respond(self.algebra, net, &tuple, i, &a, r);
                if next.is_network(self.algebra) && self.survives(&next, rounds - 1)? {
                    answered = true;
                    break;
                }
            }
            if !answered {
                result = false;
                break;
            }
        }
        self.memo.insert((net.clone(), rounds), result);
        Ok(result)
    }
}

/// Exact winner of the `rounds`-round game from the initial network, ∀ playing any tuple,
/// index and element, ∃ rejecting or accepting.
pub fn rep_game(algebra: &FiniteBao, rounds: usize, limits: RepLimits) -> Result<RepResult> {
    let elements: Vec<AtomSet> = algebra.elements().ok_or_else(|| Error::ResourceLimit { what: "algebra elements".into(), cap: 1 << 20 })?.collect();
    let mut solver = RepSolver { algebra, elements, limits, memo: HashMap::new() };
    let start = ElementNetwork::initial(algebra);
    if !start.is_network(algebra) {
        return Ok(RepResult { winner: Winner::Forall, rounds: 0, states: 0, refutation: None });
    }
    let mut refutation = None;
    if rounds > 0 && !solver.survives(&start, rounds)? {
        for (tuple, i, a) in solver.moves(&start) {
            let mut answered = false;
            for r in responses(start.nodes, limits.node_budget) {
                let next = respond(algebra, &start, &tuple, i, &a, r);
                if next.is_network(algebra) && solver.survives(&next, rounds - 1)? {
                    answered = true;
                    break;
                }
            }
            if !answered {
                refutation = Some(RepMove { tuple, index: i, element: a.to_vec() });
                break;
            }
        }
    }
    let winner = if refutation.is_some() { Winner::Forall } else { Winner::Exists };
    Ok(RepResult { winner, rounds, states: solver.memo.len(), refutation })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScheduledPlay {
    pub survived: bool,
    /// True when no scheduled challenge remains open.
    pub saturated: bool,
    pub network: ElementNetwork,
    pub trace: Vec<(RepMove, RepResponse)>,
    pub steps: usize,
}

/// The next open challenge: first a split of a non-atomic label, then a missing witness for an
/// atom below `c_i` of an atomic label.
fn next_challenge(algebra: &FiniteBao, net: &ElementNetwork) -> Option<(Vec<usize>, usize, usize)> {
    let k = algebra.atom_count();
    for code in 0..net.labels.len() {
        let label = &net.labels[code];
        if label.count() > 1 {
            for i in 0..net.dim {
                for a in 0..k {
                    let ca = algebra.cyl(i, &algebra.atom(a));
                    if label.intersects(&ca) && !label.is_subset(&ca) {
                        return Some((net.tuple(code), i, a));
                    }
                }
            }
        }
    }
    for code in 0..net.labels.len() {
        let label = &net.labels[code];
        let Some(b) = label.first().filter(|_| label.count() == 1) else { continue };
        let t = net.tuple(code);
        for i in 0..net.dim {
            for a in algebra.structure().row(i, b).iter() {
                let mut u = t.clone();
                let witnessed = (0..net.nodes).any(|w| {
                    u[i] = w;
                    let l = net.label(&u);
                    l.count() == 1 && l.contains(a)
                });
                if !witnessed {
                    return Some((t, i, a));
                }
            }
        }
    }
    None
}

struct Schedule<'a> {
    algebra: &'a FiniteBao,
    limits: RepLimits,
    steps: usize,
    trace: Vec<(RepMove, RepResponse)>,
}

impl Schedule<'_> {
    fn play(&mut self, net: ElementNetwork) -> Result<Option<ElementNetwork>> {
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(Error::ResourceLimit { what: "scheduled play steps".into(), cap: self.limits.max_steps });
        }
        let Some((tuple, i, a)) = next_challenge(self.algebra, &net) else {
            return Ok(Some(net));
        };
        let element = self.algebra.atom(a);
        for r in responses(net.nodes, self.limits.node_budget) {
            let next = respond(self.algebra, &net, &tuple, i, &element, r);
            if !next.is_network(self.algebra) {
                continue;
            }
            self.trace.push((RepMove { tuple: tuple.clone(), index: i, element: vec![a] }, r));
            if let Some(done) = self.play(next)? {
                return Ok(Some(done));
            }
            self.trace.pop();
        }
        Ok(None)
    }
}

/// ∀ plays every open challenge in a fixed order until none remain; ∃ searches depth first
/// over her answers, backtracking out of dead ends.
pub fn scheduled_rep_play(algebra: &FiniteBao, limits: RepLimits) -> Result<ScheduledPlay> {
    let start = ElementNetwork::initial(algebra);
    let mut schedule = Schedule { algebra, limits, steps: 0, trace: Vec::new() };
    let outcome = if start.is_network(algebra) { schedule.play(start.clone())? } else { None };
    let survived = outcome.is_some();
    let network = outcome.unwrap_or(start);
    let saturated = survived && next_challenge(algebra, &network).is_none();
    Ok(ScheduledPlay { survived, saturated, network, trace: schedule.trace, steps: schedule.steps })
}

/// `h(a)` is the set of tuples whose label lies below `a`, as tuple codes of the network.
#[derive(Clone, Debug, Serialize)]
pub struct Representation {
    pub network: ElementNetwork,
}

impl Representation {
    pub fn image(&self, a: &AtomSet) -> Vec<usize> {
        (0..self.network.labels.len()).filter(|&c| self.network.labels[c].is_subset(a)).collect()
    }

    pub fn image_tuples(&self, a: &AtomSet) -> Vec<Vec<usize>> {
        self.image(a).into_iter().map(|c| self.network.tuple(c)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentationCheck {
    pub homomorphism: bool,
    pub injective: bool,
    pub elements_checked: usize,
    pub pairs_checked: usize,
    pub failure: Option<String>,
}

impl RepresentationCheck {
    pub fn is_embedding(&self) -> bool {
        self.homomorphism && self.injective
    }
}

/// Builds `h` from the final network and checks it against the full square on its nodes:
/// joins and meets on every pair of `elements`, complements, cylindrifications, diagonals,
/// and injectivity.
pub fn extract_representation(algebra: &FiniteBao, network: &ElementNetwork, elements: &[AtomSet]) -> Result<(Representation, RepresentationCheck)> {
    if network.dim != algebra.dim() {
        return invalid("network and algebra dimensions differ");
    }
    let rep = Representation { network: network.clone() };
    let net = &rep.network;
    let total = net.labels.len();
    let as_set = |codes: Vec<usize>| -> AtomSet { AtomSet::from_atoms(total, codes) };
    let h = |a: &AtomSet| as_set(rep.image(a));
    let images: Vec<AtomSet> = elements.iter().map(h).collect();
    let cyl_set = |i: usize, x: &AtomSet| -> AtomSet {
        as_set(
            (0..total)
                .filter(|&c| {
                    let mut u = net.tuple(c);
                    (0..net.nodes).any(|w| {
                        u[i] = w;
                        x.contains(tuple_code(net.nodes, &u))
                    })
                })
                .collect(),
        )
    };
    let mut failure = None;
    let unit = AtomSet::full(total);
    if h(&algebra.one()) != unit {
        failure = Some("h(1) is not the full square".to_string());
    }
    if failure.is_none() && !h(&algebra.zero()).is_empty() {
        failure = Some("h(0) is not empty".to_string());
    }
    let n = algebra.dim();
    for j in 0..n {
        for i in 0..j {
            let expected = as_set((0..total).filter(|&c| net.tuple(c)[i] == net.tuple(c)[j]).collect());
            if failure.is_none() && h(&algebra.diag(i, j)) != expected {
                failure = Some(format!("h(d_{i}{j}) is not the diagonal"));
            }
        }
    }
    for (a, ha) in elements.iter().zip(&images) {
        if failure.is_some() {
            break;
        }
        if h(&algebra.one().difference(a)) != unit.difference(ha) {
            failure = Some(format!("complement of {:?} not preserved", a.to_vec()));
        }
        for i in 0..n {
            if failure.is_none() && h(&algebra.cyl(i, a)) != cyl_set(i, ha) {
                failure = Some(format!("c_{i} of {:?} not preserved", a.to_vec()));
            }
        }
    }
    let mut pairs = 0;
    let mut injective = true;
    for (p, (a, ha)) in elements.iter().zip(&images).enumerate() {
        for (b, hb) in elements[..p].iter().zip(&images[..p]) {
            pairs += 1;
            if failure.is_none() && h(&a.union(b)) != ha.union(hb) {
                failure = Some(format!("join of {:?} and {:?} not preserved", a.to_vec(), b.to_vec()));
            }
            if failure.is_none() && h(&a.intersection(b)) != ha.intersection(hb) {
                failure = Some(format!("meet of {:?} and {:?} not preserved", a.to_vec(), b.to_vec()));
            }
            if a != b && ha == hb {
                injective = false;
            }
        }
    }
    let check = RepresentationCheck { homomorphism: failure.is_none(), injective, elements_checked: elements.len(), pairs_checked: pairs, failure };
    Ok((rep, check))
}
