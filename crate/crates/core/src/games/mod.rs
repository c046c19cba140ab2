//! Atomic networks and the games played on them: the node-bounded cylindrifier games
//! `G(m, k)` and their node-reusing variant `F(m, k)`, Ehrenfeucht–Fraïssé pebble games,
//! bounded Lyndon checks, scripted rainbow refutations, and the element-network game whose
//! limit yields a representation.
//!
//! Rounds are counted with the opening: in a `k`-round game ∀ names an atom in round 0,
//! ∃ answers with a network containing it, and rounds `1..k` are cylindrifier moves.

mod certificate;
mod ef;
mod lyndon;
mod network;
mod rep;
mod script;
mod solver;
#[cfg(test)]
mod tests;

use serde::{Deserialize, Serialize};

pub use certificate::{
    verify_certificate, Certificate, Challenge, ExistsCertificate, ExistsPosition, ForallCertificate, ForallPosition, State, VerifyError,
};
pub use ef::{ef_game, EfResult};
pub use lyndon::{lyndon_check, LyndonReport, LyndonRound, LyndonVerdict};
pub use network::{canonical_form, check_network, is_network, Network, NetworkViolation};
pub use rep::{
    extract_representation, rep_game, scheduled_rep_play, ElementNetwork, RepLimits, RepMove, RepResponse, RepResult, Representation,
    RepresentationCheck, ScheduledPlay,
};
pub use script::{non_membership_certificate, scripted_forall_rainbow, MembershipCertificate, ScriptOutcome};
pub use solver::{solve_atomic_game, BudgetsUsed, GameResult, Limits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GameKind {
    /// ∀ may only extend networks.
    G,
    /// ∀ may also delete a node before each challenge.
    F,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounds {
    Finite(usize),
    Omega,
}

impl std::fmt::Display for Rounds {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rounds::Finite(k) => write!(f, "{k}"),
            Rounds::Omega => write!(f, "omega"),
        }
    }
}

impl std::str::FromStr for Rounds {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "omega" | "w" | "inf" => Ok(Rounds::Omega),
            _ => s.parse().map(Rounds::Finite).map_err(|_| crate::Error::InvalidArgument(format!("bad round count {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GameSpec {
    pub kind: GameKind,
    /// Most nodes a network may have.
    pub nodes: usize,
    pub rounds: Rounds,
}

impl GameSpec {
    pub fn g(nodes: usize, rounds: Rounds) -> Self {
        GameSpec { kind: GameKind::G, nodes, rounds }
    }

    pub fn f(nodes: usize, rounds: Rounds) -> Self {
        GameSpec { kind: GameKind::F, nodes, rounds }
    }
}

/// Whether ∀ may challenge any previously played network or only the latest one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum History {
    Positional,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Exists,
    Forall,
}

impl std::fmt::Display for Winner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Winner::Exists => "exists",
            Winner::Forall => "forall",
        })
    }
}
