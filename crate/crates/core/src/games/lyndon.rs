use super::certificate::Certificate;
use super::solver::{solve_atomic_game, Limits};
use super::{GameSpec, Rounds, Winner};
use crate::algebra::AtomStructure;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LyndonVerdict {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct LyndonRound {
    pub rounds: usize,
    /// Node bound used for this round count.
    pub nodes: usize,
    /// True when the node budget is below what `rounds` rounds can use, so a loss does not
    /// refute the unbounded game.
    pub budget_binding: bool,
    pub verdict: LyndonVerdict,
    pub states: usize,
    pub certificate: Option<Certificate>,
}

/// Per-round verdicts of the unbounded-node game `G_k` for `k = 1..=k_max`. A loss with a
/// non-binding budget refutes the Lyndon conditions; passes are evidence only.
#[derive(Clone, Debug, Serialize)]
pub struct LyndonReport {
    pub node_budget: usize,
    pub rounds: Vec<LyndonRound>,
}

impl LyndonReport {
    /// The first round count at which ∃ provably loses the unbounded game.
    pub fn refuted_at(&self) -> Option<usize> {
        self.rounds.iter().find(|r| r.verdict == LyndonVerdict::Fail && !r.budget_binding).map(|r| r.rounds)
    }

    pub fn is_complete(&self, k_max: usize) -> bool {
        self.refuted_at().is_some() || (self.rounds.len() == k_max && self.rounds.iter().all(|r| r.verdict == LyndonVerdict::Pass))
    }
}

/// Solver resource limits end the report early with an unknown verdict.
///
/// `k` rounds place at most `dim + k - 1` nodes (the opening uses at most `dim`, each later
/// round one more), so with that many nodes `G^m_k` is the unbounded game `G_k`.
pub fn lyndon_check(s: &AtomStructure, k_max: usize, node_budget: usize, limits: Limits) -> Result<LyndonReport> {
    let mut rounds = Vec::new();
    for k in 1..=k_max {
        let needed = s.dim() + k - 1;
        let nodes = needed.min(node_budget);
        let spec = GameSpec::g(nodes, Rounds::Finite(k));
        let budget_binding = nodes < needed;
        match solve_atomic_game(s, spec, limits) {
            Ok(result) => {
                let (verdict, certificate) = match result.winner {
                    Winner::Exists => (LyndonVerdict::Pass, None),
                    Winner::Forall => (LyndonVerdict::Fail, Some(result.certificate)),
                };
                let stop = verdict == LyndonVerdict::Fail && !budget_binding;
                rounds.push(LyndonRound { rounds: k, nodes, budget_binding, verdict, states: result.used.states, certificate });
                if stop {
                    break;
                }
            }
            Err(e @ Error::InvalidArgument(_)) => return Err(e),
            Err(_) => {
                rounds.push(LyndonRound {
                    rounds: k,
                    nodes,
                    budget_binding,
                    verdict: LyndonVerdict::Unknown,
                    states: limits.max_states,
                    certificate: None,
                });
                break;
            }
        }
    }
    Ok(LyndonReport { node_budget, rounds })
}
