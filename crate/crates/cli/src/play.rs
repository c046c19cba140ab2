//! Game solving, certificate replay, pebble games, Lyndon checks and the representation game.

use crate::report::{input, read_json, to_json_text, write_file, CliResult, Outcome, Status};
use crate::source::{parse_graph, AlgebraSource, AnyCertificate};
use clap::{Args, Subcommand, ValueEnum};
use cylalg::algebra::{complex_algebra, generated_subalgebra, AtomStructure};
use cylalg::games::{
    ef_game, extract_representation, lyndon_check, rep_game as solve_rep_game, scheduled_rep_play, scripted_forall_rainbow, solve_atomic_game,
    verify_certificate, GameKind, GameSpec, History, Limits, LyndonVerdict, MembershipCertificate, RepLimits, Rounds, ScriptOutcome,
};
use cylalg::AtomSet;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameCommand {
    /// Decide an atomic network game and write the winner's certificate.
    Solve(SolveArgs),
    /// Replay a certificate against an atom structure.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    #[value(name = "G")]
    G,
    #[value(name = "F")]
    F,
}

impl From<KindArg> for GameKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::G => GameKind::G,
            KindArg::F => GameKind::F,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HistoryArg {
    Positional,
    Exact,
}

impl From<HistoryArg> for History {
    fn from(h: HistoryArg) -> Self {
        match h {
            HistoryArg::Positional => History::Positional,
            HistoryArg::Exact => History::Exact,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScriptArg {
    /// Cone-based ∀ strategy for rainbow structures.
    Rainbow,
}

#[derive(Args, Debug, Serialize)]
pub struct SolverBudget {
    /// Game states the solver may store.
    #[arg(long, default_value_t = 200_000)]
    pub max_states: usize,
    /// Replies enumerated for one challenge.
    #[arg(long, default_value_t = 20_000)]
    pub max_replies: usize,
    #[arg(long, value_enum, default_value_t = HistoryArg::Positional)]
    pub history: HistoryArg,
}

impl SolverBudget {
    fn limits(&self) -> CliResult<Limits> {
        if self.max_states == 0 || self.max_replies == 0 {
            return Err(input("budgets must be positive"));
        }
        Ok(Limits { max_states: self.max_states, max_replies: self.max_replies, history: self.history.into() })
    }
}

#[derive(Args, Debug, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: AlgebraSource,
    #[arg(long, value_enum, default_value_t = KindArg::G)]
    pub kind: KindArg,
    #[arg(long)]
    pub nodes: usize,
    /// A round count or `omega`.
    #[arg(long, default_value = "omega")]
    pub rounds: Rounds,
    #[command(flatten)]
    pub budget: SolverBudget,
    /// Use a scripted ∀ strategy instead of exhaustive search.
    #[arg(long, value_enum)]
    pub script: Option<ScriptArg>,
    /// Rounds the script may use, opening included.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    #[arg(long)]
    pub certificate_out: Option<PathBuf>,
}

fn write_certificate<T: Serialize>(outcome: Outcome, out: &Option<PathBuf>, cert: &T) -> CliResult<Outcome> {
    match out {
        Some(path) => {
            let path = write_file(path, &to_json_text(cert))?;
            Ok(outcome.line(format!("certificate written to {}", path.display())))
        }
        None => Ok(outcome),
    }
}

pub fn game_solve(a: &SolveArgs, seed: u64) -> CliResult<Outcome> {
    if a.nodes == 0 {
        return Err(input("--nodes must be positive"));
    }
    let loaded = a.source.load(seed)?;
    let spec = GameSpec { kind: a.kind.into(), nodes: a.nodes, rounds: a.rounds };
    if let Some(ScriptArg::Rainbow) = a.script {
        let params = loaded.rainbow.ok_or_else(|| input("the rainbow script needs a structure built by `rainbow build`"))?;
        let rainbow = params.build(usize::MAX)?;
        if rainbow.structure != loaded.structure {
            return Err(input("structure file does not match its rainbow parameters"));
        }
        let budgets = json!({ "depth": a.depth, "nodes": a.nodes });
        return match scripted_forall_rainbow(&rainbow, spec.kind, a.nodes, a.depth)? {
            ScriptOutcome::ForallWin { rounds, certificate } => {
                let positions = certificate.positions.len();
                let claim = MembershipCertificate::NotInNeatReducts { dim: loaded.structure.dim(), nodes: a.nodes, game: certificate };
                let outcome = Outcome::new("forall", Status::Ok, json!({ "rounds": rounds, "positions": positions, "certificate": claim }))
                    .line(format!("forall wins within {rounds} rounds ({positions} positions)"))
                    .budgets(budgets);
                write_certificate(outcome, &a.certificate_out, &claim)
            }
            ScriptOutcome::Inconclusive { depth, reason } => {
                Ok(Outcome::new("unknown", Status::Unknown, json!({ "depth": depth, "reason": reason }))
                    .line(format!("script inconclusive at depth {depth}: {reason}"))
                    .budgets(budgets))
            }
        };
    }
    let result = solve_atomic_game(&loaded.structure, spec, a.budget.limits()?)?;
    let outcome = Outcome::new(result.winner.to_string(), Status::Ok, &result)
        .line(format!("{} rounds, {} nodes, {} states", result.used.rounds, result.used.nodes, result.used.states))
        .budgets(json!({ "max_states": a.budget.max_states, "max_replies": a.budget.max_replies, "nodes": a.nodes, "rounds": a.rounds }));
    write_certificate(outcome, &a.certificate_out, &result.certificate)
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: AlgebraSource,
    #[arg(long)]
    pub certificate: PathBuf,
}

pub fn game_verify(a: &VerifyArgs, seed: u64) -> CliResult<Outcome> {
    let structure = a.source.load(seed)?.structure;
    let cert: AnyCertificate = read_json(&a.certificate)?;
    let checked = match &cert {
        AnyCertificate::Game(c) => verify_certificate(&structure, c),
        AnyCertificate::Membership(c) => c.verify(&structure),
    };
    Ok(match checked {
        Ok(()) => Outcome::new("valid", Status::Ok, json!({ "valid": true })).line("certificate replays"),
        Err(e) => Outcome::new("invalid", Status::CheckFailed, json!({ "valid": false, "reason": e.to_string() })).line(e.to_string()),
    })
}

#[derive(Args, Debug, Serialize)]
pub struct EfArgs {
    #[arg(long)]
    pub left: String,
    #[arg(long)]
    pub right: String,
    #[arg(long)]
    pub pairs: usize,
    #[arg(long)]
    pub rounds: usize,
}

pub fn ef(a: &EfArgs) -> CliResult<Outcome> {
    let result = ef_game(&parse_graph(&a.left)?, &parse_graph(&a.right)?, a.pairs, a.rounds);
    Ok(Outcome::new(result.winner.to_string(), Status::Ok, result).budgets(json!({ "pairs": a.pairs, "rounds": a.rounds })))
}

#[derive(Args, Debug, Serialize)]
pub struct LyndonArgs {
    #[command(flatten)]
    pub source: AlgebraSource,
    #[arg(long, default_value_t = 12)]
    pub k_max: usize,
    /// Most nodes any round may use.
    #[arg(long, default_value_t = 8)]
    pub nodes: usize,
    #[command(flatten)]
    pub budget: SolverBudget,
    /// Where to write the refuting ∀ certificate, if one is found.
    #[arg(long)]
    pub certificate_out: Option<PathBuf>,
}

pub fn lyndon(a: &LyndonArgs, seed: u64) -> CliResult<Outcome> {
    let structure = a.source.load(seed)?.structure;
    let report = lyndon_check(&structure, a.k_max, a.nodes, a.budget.limits()?)?;
    let lines: Vec<String> = report
        .rounds
        .iter()
        .map(|r| {
            let note = if r.budget_binding { " (node budget binding)" } else { "" };
            format!("k={} nodes={} {:?}{note}", r.rounds, r.nodes, r.verdict)
        })
        .collect();
    let refuted = report.refuted_at();
    let (verdict, status) = match refuted {
        Some(_) => ("fail", Status::CheckFailed),
        None if report.is_complete(a.k_max) => ("pass", Status::Ok),
        None => ("unknown", Status::Unknown),
    };
    let cert =
        refuted.and_then(|k| report.rounds.iter().find(|r| r.rounds == k && r.verdict == LyndonVerdict::Fail)).and_then(|r| r.certificate.clone());
    let mut outcome =
        Outcome::new(verdict, status, &report).budgets(json!({ "k_max": a.k_max, "nodes": a.nodes, "max_states": a.budget.max_states }));
    outcome.lines = lines;
    match cert {
        Some(c) => write_certificate(outcome, &a.certificate_out, &c),
        None => Ok(outcome),
    }
}

#[derive(Args, Debug, Serialize)]
pub struct RepGameArgs {
    #[command(flatten)]
    pub source: AlgebraSource,
    /// Most nodes ∃ may use.
    #[arg(long, default_value_t = 4)]
    pub node_budget: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_steps: usize,
    #[arg(long, default_value_t = 200_000)]
    pub max_states: usize,
    /// Random generators of the subalgebra on which the extracted map is checked.
    #[arg(long, default_value_t = 4)]
    pub generators: usize,
    /// Also solve the exact game with this many rounds.
    #[arg(long)]
    pub rounds: Option<usize>,
}

/// Elements on which the extracted map is checked: the generated subalgebra when it is small
/// enough to list, otherwise the generators with every atom.
fn check_elements(structure: &AtomStructure, count: usize, seed: u64) -> Vec<AtomSet> {
    let algebra = complex_algebra(structure.clone());
    let k = algebra.atom_count();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let gens: Vec<AtomSet> = (0..count).map(|_| AtomSet::from_atoms(k, (0..k).filter(|_| rng.gen_bool(0.5)))).collect();
    match generated_subalgebra(&algebra, &gens).elements() {
        Some(all) => all,
        None => gens.into_iter().chain((0..k).map(|a| algebra.atom(a))).collect(),
    }
}

pub fn rep_game(a: &RepGameArgs, seed: u64) -> CliResult<Outcome> {
    if a.node_budget == 0 || a.max_steps == 0 || a.max_states == 0 {
        return Err(input("budgets must be positive"));
    }
    let structure = a.source.load(seed)?.structure;
    let algebra = complex_algebra(structure.clone());
    let limits = RepLimits { node_budget: a.node_budget, max_states: a.max_states, max_steps: a.max_steps };
    let budgets = json!({ "node_budget": a.node_budget, "max_steps": a.max_steps, "max_states": a.max_states });
    let exact = a.rounds.map(|r| solve_rep_game(&algebra, r, limits)).transpose()?;
    let play = scheduled_rep_play(&algebra, limits)?;
    let mut lines = vec![format!("survived {} saturated {} nodes {} steps {}", play.survived, play.saturated, play.network.node_count(), play.steps)];
    if let Some(r) = &exact {
        lines.push(format!("{}-round game: {} wins ({} states)", r.rounds, r.winner, r.states));
    }
    if !play.survived {
        let mut outcome = Outcome::new("forall", Status::Ok, json!({ "play": play, "exact": exact })).budgets(budgets);
        outcome.lines = lines;
        return Ok(outcome);
    }
    let elements = check_elements(&structure, a.generators, seed);
    let (_, check) = extract_representation(&algebra, &play.network, &elements)?;
    lines.push(format!("embedding {} ({} elements, {} pairs)", check.is_embedding(), check.elements_checked, check.pairs_checked));
    if let Some(f) = &check.failure {
        lines.push(f.clone());
    }
    let (verdict, status) = match (play.saturated, check.is_embedding()) {
        (true, true) => ("representation", Status::Ok),
        (true, false) => ("fail", Status::CheckFailed),
        (false, _) => ("unknown", Status::Unknown),
    };
    let mut outcome = Outcome::new(verdict, status, json!({ "play": play, "check": check, "exact": exact })).budgets(budgets);
    outcome.lines = lines;
    Ok(outcome)
}
