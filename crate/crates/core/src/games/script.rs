use super::certificate::{verify_certificate, Certificate, Challenge, ExistsCertificate, ForallCertificate, ForallPosition, State, VerifyError};
use super::network::{canonical_form, Completer, Network};
use super::solver::{solve_atomic_game, Limits};
use super::{GameKind, GameSpec, History, Rounds, Winner};
use crate::algebra::AtomStructure;
use crate::error::{invalid, Error, Result};
use crate::rainbow::{cone, white_base, RainbowAtom, RainbowStructure};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ScriptOutcome {
    /// The script beats every ∃ reply within `rounds` rounds, opening included.
    ForallWin {
        rounds: usize,
        certificate: ForallCertificate,
    },
    Inconclusive {
        depth: usize,
        reason: String,
    },
}

/// A refutation subtree: the rank it proves and the positions it uses.
type Refutation = (usize, Vec<ForallPosition>);

struct Script<'a> {
    completer: Completer<'a>,
    rainbow: &'a RainbowStructure,
    kind: GameKind,
    nodes: usize,
    /// Cone atoms in the order ∀ plays their tints.
    cones: Vec<(i64, usize)>,
}

impl Script<'_> {
    /// `apexes` lists apex nodes oldest first; base nodes are `0..dim - 1`.
    fn play(&self, net: &Network, apexes: &[usize], played: usize, rounds_left: usize) -> std::result::Result<Refutation, String> {
        if rounds_left == 0 {
            return Err("depth exhausted".into());
        }
        let n = self.rainbow.sig.dim();
        let (base, apexes, delete) = if net.node_count() >= self.nodes {
            if self.kind == GameKind::G {
                return Err("no free node and no deletions in a G game".into());
            }
            let oldest = apexes[0];
            let rest: Vec<usize> = apexes[1..].iter().map(|&a| if a > oldest { a - 1 } else { a }).collect();
            (net.delete(oldest).map_err(|e| e.to_string())?, rest, Some(oldest))
        } else {
            (net.clone(), apexes.to_vec(), None)
        };
        let (tint, atom) = self.cones[played % self.cones.len()];
        let present: Vec<i64> = apexes.iter().map(|&a| self.apex_tint(&base, a)).collect();
        if present.contains(&tint) {
            return Err(format!("tint {tint} is already on the board"));
        }
        let latest = *apexes.last().ok_or("no apex on the board")?;
        let mut tuple: Vec<usize> = (0..n - 1).collect();
        tuple.push(latest);
        let s = self.completer.structure();
        if !s.related(n - 1, base.label(&tuple), atom) {
            return Err("cone move is not legal here".into());
        }
        if base.witness(&tuple, n - 1, atom).is_some() {
            return Err("cone already witnessed".into());
        }
        let replies = self.completer.extensions(&base, &tuple, n - 1, atom, usize::MAX).map_err(|e| e.to_string())?;
        let next_apex = base.node_count();
        let mut next_apexes = apexes.clone();
        next_apexes.push(next_apex);
        let results: Vec<std::result::Result<Refutation, String>> =
            replies.par_iter().map(|r| self.play(r, &next_apexes, played + 1, rounds_left - 1)).collect();
        let mut rank = 1;
        let mut positions = Vec::new();
        for r in results {
            let (child_rank, child_positions) = r?;
            rank = rank.max(child_rank + 1);
            positions.extend(child_positions);
        }
        positions.push(self.position(net, delete, &tuple, atom, rank));
        Ok((rank, positions))
    }

    /// Tint of the green edge from base node 0 to `apex`, read off the atom on `(0, .., apex)`.
    fn apex_tint(&self, net: &Network, apex: usize) -> i64 {
        let n = self.rainbow.sig.dim();
        let mut tuple: Vec<usize> = (0..n - 1).collect();
        tuple.push(apex);
        let atom = &self.rainbow.atoms[net.label(&tuple)];
        match atom.graph.label(0, n - 1) {
            Some(crate::rainbow::Colour::GreenZero(t)) => t,
            _ => i64::MIN,
        }
    }

    /// The script's move at `net`, renamed into the canonical form of `net`.
    fn position(&self, net: &Network, delete: Option<usize>, tuple: &[usize], atom: usize, rank: usize) -> ForallPosition {
        let (canon, perm) = canonical_form(net);
        let (delete, tuple) = match delete {
            None => (None, tuple.iter().map(|&x| perm[x]).collect()),
            Some(v) => {
                let gone = perm[v];
                let rename = |x: usize| {
                    let raw = if x >= v { x + 1 } else { x };
                    let p = perm[raw];
                    if p > gone {
                        p - 1
                    } else {
                        p
                    }
                };
                (Some(gone), tuple.iter().map(|&x| rename(x)).collect())
            }
        };
        let n = self.rainbow.sig.dim();
        ForallPosition { state: vec![canon], rank, challenge: Challenge { source: 0, delete, tuple, index: n - 1, atom } }
    }
}

/// ∀ opens with a cone on the all-`w_0` base and then plays cones with fresh tints on the same
/// base, each demanded at the tuple of the base and the latest apex. In F games the oldest apex
/// is deleted whenever the board is full. Every legal ∃ reply is explored. Tints ascend, or
/// descend for order-preserving signatures.
pub fn scripted_forall_rainbow(rainbow: &RainbowStructure, kind: GameKind, nodes: usize, depth: usize) -> Result<ScriptOutcome> {
    let sig = &rainbow.sig;
    let n = sig.dim();
    if nodes < n {
        return invalid(format!("the opening cone needs {n} nodes"));
    }
    if depth == 0 {
        return Ok(ScriptOutcome::Inconclusive { depth, reason: "no rounds to play".into() });
    }
    let base = white_base(sig);
    let mut tints = sig.green_tints().to_vec();
    tints.sort_unstable();
    if sig.is_ordered() {
        tints.reverse();
    }
    let identity: Vec<usize> = (0..n).collect();
    let mut cones = Vec::new();
    for &t in &tints {
        let graph = cone(sig, &base, t)?;
        let atom = rainbow
            .atom_index(&RainbowAtom::canonical(&identity, &graph))
            .ok_or_else(|| Error::Precondition("cone atom missing from the structure".into()))?;
        cones.push((t, atom));
    }
    let script = Script { completer: Completer::new(&rainbow.structure), rainbow, kind, nodes, cones };
    let opening = script.cones[0].1;
    let openings = script.completer.openings(opening, usize::MAX)?;
    let mut positions: BTreeMap<State, ForallPosition> = BTreeMap::new();
    let mut rank = 0;
    for open in &openings {
        match script.play(open, &[n - 1], 1, depth) {
            Ok((r, ps)) => {
                rank = rank.max(r);
                for p in ps {
                    match positions.get(&p.state) {
                        Some(old) if old.rank <= p.rank => {}
                        _ => {
                            positions.insert(p.state.clone(), p);
                        }
                    }
                }
            }
            Err(reason) => return Ok(ScriptOutcome::Inconclusive { depth, reason }),
        }
    }
    let rounds = rank + 1;
    let spec = GameSpec { kind, nodes, rounds: Rounds::Finite(rounds) };
    let certificate = ForallCertificate { spec, history: History::Positional, opening, positions: positions.into_values().collect() };
    Ok(ScriptOutcome::ForallWin { rounds, certificate })
}

/// What a game outcome proves about the algebra.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum MembershipCertificate {
    /// ∀ wins the `nodes`-node game, so the algebra is not in `S Nr_dim CA_nodes`.
    NotInNeatReducts { dim: usize, nodes: usize, game: ForallCertificate },
    /// ∃ wins `G(nodes, ω)`, so the algebra has a `nodes`-square representation.
    SquareRepresentation { dim: usize, nodes: usize, game: ExistsCertificate },
}

impl MembershipCertificate {
    pub fn verify(&self, s: &AtomStructure) -> std::result::Result<(), VerifyError> {
        match self {
            MembershipCertificate::NotInNeatReducts { dim, nodes, game } => {
                if *dim != s.dim() || game.spec.nodes != *nodes {
                    return Err(VerifyError::Dimension { expected: s.dim(), found: *dim });
                }
                // A ∀-win in any G or F game on `nodes` nodes is a ∀-win in F with `nodes` nodes.
                verify_certificate(s, &Certificate::Forall(game.clone()))
            }
            MembershipCertificate::SquareRepresentation { dim, nodes, game } => {
                if *dim != s.dim() || game.spec.nodes != *nodes || game.spec.kind != GameKind::G || game.spec.rounds != Rounds::Omega {
                    return Err(VerifyError::Dimension { expected: s.dim(), found: *dim });
                }
                verify_certificate(s, &Certificate::Exists(game.clone()))
            }
        }
    }
}

/// Largest structures handed to the exhaustive fixpoint solver.
pub const EXHAUSTIVE_FIXPOINT_ATOMS: usize = 12;

/// Tries the rainbow script (when `rainbow` is given), then for small structures the exhaustive
/// `F(nodes, ω)` and `G(nodes, ω)` solvers. `None` when nothing conclusive is found.
pub fn non_membership_certificate(
    s: &AtomStructure,
    rainbow: Option<&RainbowStructure>,
    nodes: usize,
    depth: usize,
    limits: Limits,
) -> Result<Option<MembershipCertificate>> {
    let dim = s.dim();
    if let Some(r) = rainbow {
        if let ScriptOutcome::ForallWin { certificate, .. } = scripted_forall_rainbow(r, GameKind::F, nodes, depth)? {
            return Ok(Some(MembershipCertificate::NotInNeatReducts { dim, nodes, game: certificate }));
        }
    }
    if s.atom_count() > EXHAUSTIVE_FIXPOINT_ATOMS {
        return Ok(None);
    }
    let limits = Limits { history: History::Positional, ..limits };
    let f = match solve_atomic_game(s, GameSpec::f(nodes, Rounds::Omega), limits) {
        Ok(r) => r,
        Err(Error::ResourceLimit { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    if let (Winner::Forall, Certificate::Forall(game)) = (f.winner, f.certificate) {
        return Ok(Some(MembershipCertificate::NotInNeatReducts { dim, nodes, game }));
    }
    let g = match solve_atomic_game(s, GameSpec::g(nodes, Rounds::Omega), limits) {
        Ok(r) => r,
        Err(Error::ResourceLimit { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    match (g.winner, g.certificate) {
        (Winner::Exists, Certificate::Exists(game)) => Ok(Some(MembershipCertificate::SquareRepresentation { dim, nodes, game })),
        (Winner::Forall, Certificate::Forall(game)) => Ok(Some(MembershipCertificate::NotInNeatReducts { dim, nodes, game })),
        _ => Ok(None),
    }
}
