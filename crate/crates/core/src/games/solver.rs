use super::certificate::{next_state, Certificate, Challenge, ExistsCertificate, ExistsPosition, ForallCertificate, ForallPosition, State};
use super::network::{canonical_form, Completer, Network};
use super::{GameKind, GameSpec, History, Rounds, Winner};
use crate::algebra::AtomStructure;
use crate::error::{invalid, Error, Result};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::rc::Rc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Distinct game states the solver may store.
    pub max_states: usize,
    /// Replies enumerated for a single challenge.
    pub max_replies: usize,
    pub history: History,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_states: 200_000, max_replies: 20_000, history: History::Positional }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BudgetsUsed {
    pub rounds: usize,
    pub nodes: usize,
    pub states: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GameResult {
    pub spec: GameSpec,
    pub winner: Winner,
    pub certificate: Certificate,
    pub used: BudgetsUsed,
}

/// A non-null challenge together with ∃'s possible replies, each paired with the state it leads to.
struct Move {
    challenge: Challenge,
    replies: Vec<(Network, State)>,
}

/// A non-null challenge and the network ∃ must extend to answer it.
struct Probe {
    challenge: Challenge,
    base: Network,
    /// False when the base already uses every node, so ∃ has no reply.
    open: bool,
}

struct Engine<'a> {
    completer: Rc<Completer<'a>>,
    spec: GameSpec,
    limits: Limits,
    probes: HashMap<State, Rc<Vec<Probe>>>,
    moves: HashMap<State, Rc<Vec<Move>>>,
    max_nodes: usize,
}

impl<'a> Engine<'a> {
    fn new(s: &'a AtomStructure, spec: GameSpec, limits: Limits) -> Self {
        Engine { completer: Rc::new(Completer::new(s)), spec, limits, probes: HashMap::new(), moves: HashMap::new(), max_nodes: 0 }
    }

    fn structure(&self) -> &AtomStructure {
        self.completer.structure()
    }

    fn states(&self) -> usize {
        self.probes.len()
    }

    /// Minimal opening replies to each atom, deduplicated up to renaming.
    fn openings(&mut self, atom: usize) -> Result<Vec<(Network, State)>> {
        let mut seen = BTreeMap::new();
        for net in self.completer.openings(atom, self.limits.max_replies)? {
            if net.node_count() <= self.spec.nodes {
                let canon = canonical_form(&net).0;
                self.max_nodes = self.max_nodes.max(net.node_count());
                seen.entry(vec![canon]).or_insert(net);
            }
        }
        Ok(seen.into_iter().map(|(st, net)| (net, st)).collect())
    }

    /// ∀'s non-null challenges at `state`, unanswerable ones first.
    fn probes(&mut self, state: &State) -> Result<Rc<Vec<Probe>>> {
        if let Some(p) = self.probes.get(state) {
            return Ok(p.clone());
        }
        if self.probes.len() >= self.limits.max_states {
            return Err(Error::ResourceLimit { what: "game states".into(), cap: self.limits.max_states });
        }
        let n = self.structure().dim();
        let mut out = Vec::new();
        for (source, net) in state.iter().enumerate() {
            let mut bases = vec![(None, net.clone())];
            if self.spec.kind == GameKind::F && net.node_count() > 1 {
                bases.extend((0..net.node_count()).map(|v| (Some(v), net.delete(v).expect("in range"))));
            }
            for (delete, base) in bases {
                let mut seen = BTreeSet::new();
                let open = base.node_count() < self.spec.nodes;
                for code in 0..base.tuple_count() {
                    let t = base.tuple(code);
                    let label = base.labels()[code] as usize;
                    for i in 0..n {
                        for atom in self.structure().row(i, label).iter() {
                            let challenge = Challenge { source, delete, tuple: t.clone(), index: i, atom };
                            if !seen.insert(challenge.key()) || base.witness(&t, i, atom).is_some() {
                                continue;
                            }
                            out.push(Probe { challenge, base: base.clone(), open });
                        }
                    }
                }
            }
        }
        out.sort_by_key(|p| p.open);
        let rc = Rc::new(out);
        self.probes.insert(state.clone(), rc.clone());
        Ok(rc)
    }

    /// Every reply to `probe`, one per successor state.
    fn replies(&mut self, state: &State, probe: &Probe) -> Result<Vec<(Network, State)>> {
        if !probe.open {
            return Ok(Vec::new());
        }
        let c = &probe.challenge;
        let mut by_state = BTreeMap::new();
        for reply in self.completer.extensions(&probe.base, &c.tuple, c.index, c.atom, self.limits.max_replies)? {
            by_state.entry(next_state(self.limits.history, state, &reply)).or_insert(reply);
        }
        self.max_nodes = self.max_nodes.max(probe.base.node_count() + 1);
        Ok(by_state.into_iter().map(|(st, net)| (net, st)).collect())
    }

    fn moves(&mut self, state: &State) -> Result<Rc<Vec<Move>>> {
        if let Some(m) = self.moves.get(state) {
            return Ok(m.clone());
        }
        let probes = self.probes(state)?;
        let mut out = Vec::with_capacity(probes.len());
        for p in probes.iter() {
            out.push(Move { challenge: p.challenge.clone(), replies: self.replies(state, p)? });
        }
        // Challenges with fewest replies first: refutations are found sooner.
        out.sort_by_key(|m| m.replies.len());
        let rc = Rc::new(out);
        self.moves.insert(state.clone(), rc.clone());
        Ok(rc)
    }
}

/// Backward induction over `rounds` remaining rounds, memoized by state.
struct FiniteSolver<'a> {
    engine: Engine<'a>,
    /// Largest round count known to be an ∃-win, smallest known to be a ∀-win.
    bounds: HashMap<State, (usize, usize)>,
}

impl FiniteSolver<'_> {
    fn wins(&mut self, state: &State, rounds: usize) -> Result<bool> {
        if rounds == 0 {
            return Ok(true);
        }
        let (win, lose) = self.bounds.get(state).copied().unwrap_or((0, usize::MAX));
        if rounds <= win {
            return Ok(true);
        }
        if rounds >= lose {
            return Ok(false);
        }
        let probes = self.engine.probes(state)?;
        let mut result = true;
        for p in probes.iter() {
            if self.answer(state, p, rounds - 1)?.is_none() {
                result = false;
                break;
            }
        }
        let entry = self.bounds.entry(state.clone()).or_insert((0, usize::MAX));
        if result {
            entry.0 = entry.0.max(rounds);
        } else {
            entry.1 = entry.1.min(rounds);
        }
        Ok(result)
    }

    /// ∃'s first reply to `probe` that survives `rounds` more rounds. Replies are generated
    /// lazily, so a quick answer skips the rest of the enumeration.
    fn answer(&mut self, state: &State, probe: &Probe, rounds: usize) -> Result<Option<(Network, State)>> {
        if !probe.open {
            return Ok(None);
        }
        let completer = Rc::clone(&self.engine.completer);
        let history = self.engine.limits.history;
        let cap = self.engine.limits.max_replies;
        self.engine.max_nodes = self.engine.max_nodes.max(probe.base.node_count() + 1);
        let c = &probe.challenge;
        let mut tried = HashSet::new();
        let mut found = None;
        let mut emitted = 0;
        completer.each_extension(&probe.base, &c.tuple, c.index, c.atom, &mut |net| {
            emitted += 1;
            if emitted > cap {
                return Err(Error::ResourceLimit { what: "network completions".into(), cap });
            }
            let next = next_state(history, state, &net);
            if !tried.insert(next.clone()) {
                return Ok(false);
            }
            if self.wins(&next, rounds)? {
                found = Some((net, next));
                return Ok(true);
            }
            Ok(false)
        })?;
        Ok(found)
    }

    /// Fewest rounds in which ∀ wins from `state`, given that he wins within `rounds`.
    fn rank(&mut self, state: &State, rounds: usize) -> Result<usize> {
        for r in 1..=rounds {
            if !self.wins(state, r)? {
                return Ok(r);
            }
        }
        unreachable!("caller guarantees a ∀-win within the bound")
    }

    fn forall_certificate(&mut self, opening: usize, replies: &[(Network, State)], rounds: usize) -> Result<ForallCertificate> {
        let mut positions: BTreeMap<State, ForallPosition> = BTreeMap::new();
        let mut stack: Vec<(State, usize)> = Vec::new();
        for (_, st) in replies {
            let r = self.rank(st, rounds)?;
            stack.push((st.clone(), r));
        }
        while let Some((state, rank)) = stack.pop() {
            if positions.get(&state).is_some_and(|p| p.rank <= rank) {
                continue;
            }
            let probes = self.engine.probes(&state)?;
            let mut chosen = None;
            for p in probes.iter() {
                if self.answer(&state, p, rank - 1)?.is_none() {
                    chosen = Some(p);
                    break;
                }
            }
            let p = chosen.expect("a ∀-win has a refuting challenge");
            for (_, next) in self.engine.replies(&state, p)? {
                let r = self.rank(&next, rank - 1)?;
                stack.push((next, r));
            }
            positions.insert(state.clone(), ForallPosition { state, rank, challenge: p.challenge.clone() });
        }
        Ok(ForallCertificate { spec: self.engine.spec, history: self.engine.limits.history, opening, positions: positions.into_values().collect() })
    }

    fn exists_certificate(&mut self, openings: Vec<(usize, Network, State)>, rounds: usize) -> Result<ExistsCertificate> {
        let mut positions: BTreeMap<State, ExistsPosition> = BTreeMap::new();
        let mut stack: Vec<(State, usize)> = openings.iter().map(|(_, _, st)| (st.clone(), rounds)).collect();
        while let Some((state, r)) = stack.pop() {
            if r == 0 || positions.get(&state).is_some_and(|p| matches!(p.rounds, Rounds::Finite(h) if h >= r)) {
                continue;
            }
            let probes = self.engine.probes(&state)?;
            let mut replies = Vec::new();
            for p in probes.iter() {
                let (net, next) = self.answer(&state, p, r - 1)?.expect("an ∃-win answers every challenge");
                replies.push((p.challenge.clone(), net));
                stack.push((next, r - 1));
            }
            positions.insert(state.clone(), ExistsPosition { state, rounds: Rounds::Finite(r), replies });
        }
        Ok(ExistsCertificate {
            spec: self.engine.spec,
            history: self.engine.limits.history,
            openings: openings.into_iter().map(|(a, net, _)| (a, net)).collect(),
            positions: positions.into_values().collect(),
        })
    }
}

/// Solves `G(m, k)`, `G(m, ω)`, `F(m, k)` or `F(m)` on the networks of `s`. Finite games are
/// solved by backward induction; `ω` games by the greatest fixpoint of ∃-safe positions.
pub fn solve_atomic_game(s: &AtomStructure, spec: GameSpec, limits: Limits) -> Result<GameResult> {
    if spec.nodes == 0 {
        return invalid("games need at least one node");
    }
    match spec.rounds {
        Rounds::Finite(k) => solve_finite(s, spec, limits, k),
        Rounds::Omega if limits.history == History::Exact => invalid("exact history is only supported for games with finitely many rounds"),
        Rounds::Omega => solve_fixpoint(s, spec, limits),
    }
}

fn solve_finite(s: &AtomStructure, spec: GameSpec, limits: Limits, k: usize) -> Result<GameResult> {
    let mut solver = FiniteSolver { engine: Engine::new(s, spec, limits), bounds: HashMap::new() };
    if k == 0 {
        let certificate = Certificate::Exists(ExistsCertificate { spec, history: limits.history, openings: vec![], positions: vec![] });
        return Ok(GameResult { spec, winner: Winner::Exists, certificate, used: BudgetsUsed::default() });
    }
    let mut chosen = Vec::new();
    for atom in 0..s.atom_count() {
        let replies = solver.engine.openings(atom)?;
        let mut good = None;
        for (net, st) in &replies {
            if solver.wins(st, k - 1)? {
                good = Some((net.clone(), st.clone()));
                break;
            }
        }
        match good {
            Some((net, st)) => chosen.push((atom, net, st)),
            None => {
                let cert = solver.forall_certificate(atom, &replies, k - 1)?;
                let rounds = 1 + cert.positions.iter().map(|p| p.rank).max().unwrap_or(0);
                let used = BudgetsUsed { rounds, nodes: solver.engine.max_nodes, states: solver.engine.states() };
                return Ok(GameResult { spec, winner: Winner::Forall, certificate: Certificate::Forall(cert), used });
            }
        }
    }
    let cert = solver.exists_certificate(chosen, k - 1)?;
    let used = BudgetsUsed { rounds: k, nodes: solver.engine.max_nodes, states: solver.engine.states() };
    Ok(GameResult { spec, winner: Winner::Exists, certificate: Certificate::Exists(cert), used })
}

fn solve_fixpoint(s: &AtomStructure, spec: GameSpec, limits: Limits) -> Result<GameResult> {
    let mut engine = Engine::new(s, spec, limits);
    let mut index: HashMap<State, usize> = HashMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut queue = VecDeque::new();
    let mut openings = Vec::new();
    let mut intern = |st: &State, states: &mut Vec<State>, queue: &mut VecDeque<usize>| -> usize {
        *index.entry(st.clone()).or_insert_with(|| {
            states.push(st.clone());
            queue.push_back(states.len() - 1);
            states.len() - 1
        })
    };
    for atom in 0..s.atom_count() {
        let replies = engine.openings(atom)?;
        let ids: Vec<(Network, usize)> = replies.iter().map(|(net, st)| (net.clone(), intern(st, &mut states, &mut queue))).collect();
        openings.push(ids);
    }
    // edges[state] = per challenge, the successor ids with ∃'s reply networks.
    let mut edges: Vec<Vec<(Challenge, Vec<(Network, usize)>)>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let moves = engine.moves(&states[id].clone())?;
        let mut list = Vec::new();
        for m in moves.iter() {
            let succ = m.replies.iter().map(|(net, st)| (net.clone(), intern(st, &mut states, &mut queue))).collect();
            list.push((m.challenge.clone(), succ));
        }
        if edges.len() <= id {
            edges.resize_with(id + 1, Vec::new);
        }
        edges[id] = list;
    }
    edges.resize_with(states.len(), Vec::new);
    // rank[s] = iteration in which s was removed from the ∃-safe set.
    let mut rank: Vec<Option<usize>> = vec![None; states.len()];
    let mut killer: Vec<Option<usize>> = vec![None; states.len()];
    let mut iteration = 0;
    loop {
        iteration += 1;
        let mut removed = Vec::new();
        for id in 0..states.len() {
            if rank[id].is_some() {
                continue;
            }
            if let Some(c) = edges[id].iter().position(|(_, succ)| succ.iter().all(|(_, t)| rank[*t].is_some())) {
                removed.push((id, c));
            }
        }
        if removed.is_empty() {
            break;
        }
        for (id, c) in removed {
            rank[id] = Some(iteration);
            killer[id] = Some(c);
        }
    }
    let max_nodes = engine.max_nodes;
    let used = |rounds| BudgetsUsed { rounds, nodes: max_nodes, states: states.len() };
    if let Some(atom) = (0..s.atom_count()).find(|&a| openings[a].iter().all(|(_, id)| rank[*id].is_some())) {
        let mut positions = BTreeMap::new();
        let mut stack: Vec<usize> = openings[atom].iter().map(|(_, id)| *id).collect();
        while let Some(id) = stack.pop() {
            if positions.contains_key(&id) {
                continue;
            }
            let (challenge, succ) = &edges[id][killer[id].expect("removed")];
            stack.extend(succ.iter().map(|(_, t)| *t));
            positions.insert(id, ForallPosition { state: states[id].clone(), rank: rank[id].expect("removed"), challenge: challenge.clone() });
        }
        let rounds = 1 + positions.values().map(|p| p.rank).max().unwrap_or(0);
        let cert = ForallCertificate { spec, history: limits.history, opening: atom, positions: positions.into_values().collect() };
        return Ok(GameResult { spec, winner: Winner::Forall, certificate: Certificate::Forall(cert), used: used(rounds) });
    }
    let mut chosen_openings = Vec::new();
    let mut stack = Vec::new();
    for (atom, replies) in openings.iter().enumerate() {
        let (net, id) = replies.iter().find(|(_, id)| rank[*id].is_none()).expect("∃ survives every opening");
        chosen_openings.push((atom, net.clone()));
        stack.push(*id);
    }
    let mut positions = BTreeMap::new();
    while let Some(id) = stack.pop() {
        if positions.contains_key(&id) {
            continue;
        }
        let mut replies = Vec::new();
        for (challenge, succ) in &edges[id] {
            let (net, t) = succ.iter().find(|(_, t)| rank[*t].is_none()).expect("safe states answer every challenge");
            replies.push((challenge.clone(), net.clone()));
            stack.push(*t);
        }
        positions.insert(id, ExistsPosition { state: states[id].clone(), rounds: Rounds::Omega, replies });
    }
    let cert = ExistsCertificate { spec, history: limits.history, openings: chosen_openings, positions: positions.into_values().collect() };
    Ok(GameResult { spec, winner: Winner::Exists, certificate: Certificate::Exists(cert), used: used(0) })
}
