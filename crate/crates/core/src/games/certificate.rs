use super::network::{canonical_form, check_network, Network};
use super::{GameKind, GameSpec, History, Rounds};
use crate::algebra::AtomStructure;
use crate::atomset::AtomSet;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A cylindrifier move: in network `source` of the current state, optionally delete a node
/// (F games only), then demand a witness for `atom` at `tuple` varied in coordinate `index`.
/// Tuples name nodes after the deletion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Challenge {
    pub source: usize,
    pub delete: Option<usize>,
    pub tuple: Vec<usize>,
    pub index: usize,
    pub atom: usize,
}

impl Challenge {
    /// Identifies the demand independently of the representative tuple.
    pub fn key(&self) -> (usize, Option<usize>, Vec<usize>, usize, usize) {
        let mut masked = self.tuple.clone();
        masked[self.index] = usize::MAX;
        (self.source, self.delete, masked, self.index, self.atom)
    }
}

/// A game state: the played networks ∀ may still choose from, each in canonical form and
/// sorted. Positional play keeps only the current network.
pub type State = Vec<Network>;

pub(crate) fn next_state(history: History, state: &State, response: &Network) -> State {
    let canon = canonical_form(response).0;
    match history {
        History::Positional => vec![canon],
        History::Exact => {
            let mut set: BTreeSet<Network> = state.iter().cloned().collect();
            set.insert(canon);
            set.into_iter().collect()
        }
    }
}

/// ∀ wins: from every listed state ∀ has a challenge all of whose replies lead to listed
/// states of strictly smaller rank. `rank` bounds the rounds ∀ still needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForallCertificate {
    pub spec: GameSpec,
    pub history: History,
    pub opening: usize,
    pub positions: Vec<ForallPosition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForallPosition {
    pub state: State,
    pub rank: usize,
    pub challenge: Challenge,
}

/// ∃ wins: an opening reply for every atom, and for every listed state a reply to every
/// challenge leading to a listed state with enough rounds left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistsCertificate {
    pub spec: GameSpec,
    pub history: History,
    pub openings: Vec<(usize, Network)>,
    pub positions: Vec<ExistsPosition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistsPosition {
    pub state: State,
    pub rounds: Rounds,
    pub replies: Vec<(Challenge, Network)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "player", rename_all = "lowercase")]
pub enum Certificate {
    Forall(ForallCertificate),
    Exists(ExistsCertificate),
}

impl Certificate {
    pub fn spec(&self) -> GameSpec {
        match self {
            Certificate::Forall(c) => c.spec,
            Certificate::Exists(c) => c.spec,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("certificate is for dimension {found}, structure has {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("state {state} is malformed: {reason}")]
    BadState { state: usize, reason: String },
    #[error("illegal challenge at state {state}: {reason}")]
    IllegalChallenge { state: usize, reason: String },
    #[error("reply at state {state} is not covered: {reason}")]
    Uncovered { state: usize, reason: String },
    #[error("opening for atom {atom}: {reason}")]
    Opening { atom: usize, reason: String },
}

/// Generate-and-test enumeration used only by the verifier: tuples are filled in code order,
/// candidates come from the `T_i`-row of one filled neighbour and are checked against all
/// filled neighbours.
struct Enumerator<'a> {
    s: &'a AtomStructure,
}

impl Enumerator<'_> {
    fn fits(&self, nodes: usize, labels: &[Option<u32>], code: usize, a: usize) -> bool {
        let n = self.s.dim();
        let t = super::network::decode_tuple(nodes, n, code);
        for j in 0..n {
            for i in 0..j {
                if self.s.in_diagonal(a, i, j) != (t[i] == t[j]) {
                    return false;
                }
            }
        }
        let mut u = t.clone();
        for i in 0..n {
            for w in 0..nodes {
                u[i] = w;
                let c = super::network::tuple_code(nodes, &u);
                let b = if c == code { Some(a as u32) } else { labels[c] };
                if let Some(b) = b {
                    if !self.s.related(i, a, b as usize) || !self.s.related(i, b as usize, a) {
                        return false;
                    }
                }
            }
            u[i] = t[i];
        }
        true
    }

    /// Atoms that may label `code` given the filled tuples.
    fn candidates(&self, nodes: usize, labels: &[Option<u32>], code: usize) -> Vec<usize> {
        let n = self.s.dim();
        let t = super::network::decode_tuple(nodes, n, code);
        let mut allowed: Option<AtomSet> = None;
        let mut u = t.clone();
        for i in 0..n {
            for w in 0..nodes {
                u[i] = w;
                let c = super::network::tuple_code(nodes, &u);
                if let (true, Some(b)) = (c != code, labels[c]) {
                    let row = self.s.row(i, b as usize);
                    match allowed.as_mut() {
                        Some(set) => set.intersect_with(row),
                        None => allowed = Some(row.clone()),
                    }
                }
            }
            u[i] = t[i];
        }
        let pool: Vec<usize> = match allowed {
            Some(set) => set.iter().collect(),
            None => (0..self.s.atom_count()).collect(),
        };
        pool.into_iter().filter(|&a| self.fits(nodes, labels, code, a)).collect()
    }

    /// Fills every open tuple, always branching on the one with fewest candidates.
    fn fill(&self, nodes: usize, labels: &mut Vec<Option<u32>>, out: &mut Vec<Network>) {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for code in (0..labels.len()).filter(|&c| labels[c].is_none()) {
            let options = self.candidates(nodes, labels, code);
            if best.as_ref().is_none_or(|(_, b)| options.len() < b.len()) {
                let done = options.is_empty();
                best = Some((code, options));
                if done {
                    break;
                }
            }
        }
        let Some((code, options)) = best else {
            let full = labels.iter().map(|l| l.expect("filled")).collect();
            out.push(Network::new(self.s.dim(), nodes, full).expect("sized"));
            return;
        };
        for a in options {
            labels[code] = Some(a as u32);
            self.fill(nodes, labels, out);
        }
        labels[code] = None;
    }

    /// Seeds the fixed tuples, rejecting them if they clash with each other.
    fn fill_from(&self, nodes: usize, mut labels: Vec<Option<u32>>, out: &mut Vec<Network>) {
        let fixed: Vec<usize> = (0..labels.len()).filter(|&c| labels[c].is_some()).collect();
        let mut seeded = vec![None; labels.len()];
        for code in fixed {
            let a = labels[code].expect("fixed") as usize;
            if !self.fits(nodes, &seeded, code, a) {
                return;
            }
            seeded[code] = Some(a as u32);
        }
        labels = seeded;
        self.fill(nodes, &mut labels, out);
    }

    fn extensions(&self, base: &Network, tuple: &[usize], i: usize, atom: usize) -> Vec<Network> {
        let n = self.s.dim();
        let nodes = base.node_count() + 1;
        let mut labels = vec![None; nodes.pow(n as u32)];
        for code in 0..base.tuple_count() {
            labels[super::network::tuple_code(nodes, &base.tuple(code))] = Some(base.labels()[code]);
        }
        let mut target = tuple.to_vec();
        target[i] = base.node_count();
        labels[super::network::tuple_code(nodes, &target)] = Some(atom as u32);
        let mut out = Vec::new();
        self.fill_from(nodes, labels, &mut out);
        out
    }

    fn openings(&self, atom: usize, max_nodes: usize) -> Vec<Network> {
        let n = self.s.dim();
        let mut out = Vec::new();
        for nodes in 1..=max_nodes.min(n) {
            for code in 0..nodes.pow(n as u32) {
                let t = super::network::decode_tuple(nodes, n, code);
                let onto = (0..nodes).all(|v| t.contains(&v));
                let growth = t.iter().enumerate().all(|(j, &x)| x <= t[..j].iter().max().map_or(0, |m| m + 1));
                if !onto || !growth {
                    continue;
                }
                let mut labels = vec![None; nodes.pow(n as u32)];
                labels[code] = Some(atom as u32);
                self.fill_from(nodes, labels, &mut out);
            }
        }
        out
    }
}

/// All legal challenges on `state`, one representative per demand, including null ones.
fn all_challenges(s: &AtomStructure, spec: &GameSpec, state: &State) -> Vec<(Challenge, Network)> {
    let n = s.dim();
    let mut out = Vec::new();
    for (source, net) in state.iter().enumerate() {
        let mut bases = vec![(None, net.clone())];
        if spec.kind == GameKind::F && net.node_count() > 1 {
            bases.extend((0..net.node_count()).map(|v| (Some(v), net.delete(v).expect("in range"))));
        }
        for (delete, base) in bases {
            let mut seen = BTreeSet::new();
            for code in 0..base.tuple_count() {
                let t = base.tuple(code);
                let label = base.labels()[code] as usize;
                for i in 0..n {
                    for a in s.row(i, label).iter() {
                        let c = Challenge { source, delete, tuple: t.clone(), index: i, atom: a };
                        if seen.insert(c.key()) {
                            out.push((c, base.clone()));
                        }
                    }
                }
            }
        }
    }
    out
}

fn check_state(s: &AtomStructure, spec: &GameSpec, history: History, idx: usize, state: &State) -> Result<(), VerifyError> {
    if state.is_empty() || (history == History::Positional && state.len() != 1) {
        return Err(VerifyError::BadState { state: idx, reason: "wrong number of networks".into() });
    }
    for net in state {
        if net.node_count() > spec.nodes {
            return Err(VerifyError::BadState { state: idx, reason: "too many nodes".into() });
        }
        if let Err(v) = check_network(s, net) {
            return Err(VerifyError::BadState { state: idx, reason: format!("not a network at {:?}: {}", v.tuple, v.reason) });
        }
        if &canonical_form(net).0 != net {
            return Err(VerifyError::BadState { state: idx, reason: "network not in canonical form".into() });
        }
    }
    Ok(())
}

/// Replays a certificate against `s` with an enumeration independent of the solvers.
pub fn verify_certificate(s: &AtomStructure, cert: &Certificate) -> Result<(), VerifyError> {
    let spec = cert.spec();
    match cert {
        Certificate::Forall(c) => verify_forall(s, &spec, c),
        Certificate::Exists(c) => verify_exists(s, &spec, c),
    }
}

fn verify_forall(s: &AtomStructure, spec: &GameSpec, c: &ForallCertificate) -> Result<(), VerifyError> {
    let e = Enumerator { s };
    if c.opening >= s.atom_count() {
        return Err(VerifyError::Opening { atom: c.opening, reason: "not an atom".into() });
    }
    let mut ranks: BTreeMap<&State, usize> = BTreeMap::new();
    for (idx, p) in c.positions.iter().enumerate() {
        check_state(s, spec, c.history, idx, &p.state)?;
        if p.rank == 0 {
            return Err(VerifyError::BadState { state: idx, reason: "rank 0 leaves ∃ the winner".into() });
        }
        ranks.insert(&p.state, p.rank);
    }
    let bound = match spec.rounds {
        Rounds::Finite(0) => return Err(VerifyError::Opening { atom: c.opening, reason: "∃ wins a game with no rounds".into() }),
        Rounds::Finite(k) => k - 1,
        Rounds::Omega => usize::MAX,
    };
    let covered = |state: &State, limit: usize| ranks.get(state).is_some_and(|&r| r <= limit);
    for open in e.openings(c.opening, spec.nodes) {
        let st = vec![canonical_form(&open).0];
        if !covered(&st, bound) {
            return Err(VerifyError::Opening { atom: c.opening, reason: "an opening reply is not refuted in time".into() });
        }
    }
    for (idx, p) in c.positions.iter().enumerate() {
        let ch = &p.challenge;
        let net = p.state.get(ch.source).ok_or_else(|| VerifyError::IllegalChallenge { state: idx, reason: "no such source".into() })?;
        let base = match ch.delete {
            None => net.clone(),
            Some(_) if spec.kind == GameKind::G => return Err(VerifyError::IllegalChallenge { state: idx, reason: "deletion in a G game".into() }),
            Some(v) => net.delete(v).map_err(|e| VerifyError::IllegalChallenge { state: idx, reason: e.to_string() })?,
        };
        let n = s.dim();
        if ch.tuple.len() != n || ch.index >= n || ch.atom >= s.atom_count() || ch.tuple.iter().any(|&x| x >= base.node_count()) {
            return Err(VerifyError::IllegalChallenge { state: idx, reason: "out of range".into() });
        }
        if !s.related(ch.index, base.label(&ch.tuple), ch.atom) {
            return Err(VerifyError::IllegalChallenge { state: idx, reason: "atom is not below the cylindrification".into() });
        }
        if base.witness(&ch.tuple, ch.index, ch.atom).is_some() {
            // ∃ answers with the network unchanged.
            return Err(VerifyError::Uncovered { state: idx, reason: "challenge already has a witness".into() });
        }
        if base.node_count() >= spec.nodes {
            continue;
        }
        for reply in e.extensions(&base, &ch.tuple, ch.index, ch.atom) {
            let next = next_state(c.history, &p.state, &reply);
            if !covered(&next, p.rank - 1) {
                return Err(VerifyError::Uncovered { state: idx, reason: "a reply escapes the refutation".into() });
            }
        }
    }
    Ok(())
}

fn verify_exists(s: &AtomStructure, spec: &GameSpec, c: &ExistsCertificate) -> Result<(), VerifyError> {
    let needed_after_opening = match spec.rounds {
        Rounds::Finite(0) => return Ok(()),
        Rounds::Finite(k) => Rounds::Finite(k - 1),
        Rounds::Omega => Rounds::Omega,
    };
    let mut positions: BTreeMap<&State, Rounds> = BTreeMap::new();
    for (idx, p) in c.positions.iter().enumerate() {
        check_state(s, spec, c.history, idx, &p.state)?;
        positions.insert(&p.state, p.rounds);
    }
    let enough = |state: &State, need: Rounds| match need {
        Rounds::Finite(0) => true,
        Rounds::Finite(r) => {
            matches!(positions.get(state), Some(Rounds::Omega)) || matches!(positions.get(state), Some(Rounds::Finite(h)) if *h >= r)
        }
        Rounds::Omega => matches!(positions.get(state), Some(Rounds::Omega)),
    };
    let openings: BTreeMap<usize, &Network> = c.openings.iter().map(|(a, n)| (*a, n)).collect();
    for atom in 0..s.atom_count() {
        let Some(net) = openings.get(&atom) else {
            return Err(VerifyError::Opening { atom, reason: "no reply".into() });
        };
        if net.node_count() > spec.nodes || check_network(s, net).is_err() || !net.labels().contains(&(atom as u32)) {
            return Err(VerifyError::Opening { atom, reason: "reply is not a network containing the atom".into() });
        }
        if !enough(&vec![canonical_form(net).0], needed_after_opening) {
            return Err(VerifyError::Opening { atom, reason: "reply state not covered".into() });
        }
    }
    for (idx, p) in c.positions.iter().enumerate() {
        let need = match p.rounds {
            Rounds::Finite(0) => continue,
            Rounds::Finite(r) => Rounds::Finite(r - 1),
            Rounds::Omega => Rounds::Omega,
        };
        let replies: BTreeMap<_, &Network> = p.replies.iter().map(|(ch, net)| (ch.key(), net)).collect();
        for (ch, base) in all_challenges(s, spec, &p.state) {
            if base.witness(&ch.tuple, ch.index, ch.atom).is_some() {
                // Staying put is always available, and a subnetwork is never worse for ∃.
                continue;
            }
            let Some(reply) = replies.get(&ch.key()) else {
                return Err(VerifyError::Uncovered { state: idx, reason: format!("no reply to {ch:?}") });
            };
            let mut target = ch.tuple.clone();
            target[ch.index] = base.node_count();
            let legal = reply.node_count() == base.node_count() + 1
                && reply.node_count() <= spec.nodes
                && base.is_prefix_of(reply)
                && reply.label(&target) == ch.atom
                && check_network(s, reply).is_ok();
            if !legal {
                return Err(VerifyError::Uncovered { state: idx, reason: format!("illegal reply to {ch:?}") });
            }
            if !enough(&next_state(c.history, &p.state, reply), need) {
                return Err(VerifyError::Uncovered { state: idx, reason: format!("reply to {ch:?} leaves the strategy") });
            }
        }
    }
    Ok(())
}
