//! `cylalg`: constructions, checkers and game solvers for finite cylindric algebras.

mod build;
mod logic;
mod play;
mod report;
mod source;

use clap::{Parser, Subcommand};
use report::{exit_code, to_json_text, CliResult, Outcome, RunContext};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "cylalg", version, about = "Finite cylindric algebras, rainbow and Monk-style atom structures, atomic games, guarded logic")]
struct Cli {
    /// Print the run envelope as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel searches; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Build a graph and report its invariants.
    Graph(build::GraphArgs),
    /// Algebra-level checks.
    #[command(subcommand)]
    Algebra(build::AlgebraCommand),
    /// Build a (relativized) cylindric set algebra.
    SetAlgebra(build::SetAlgebraArgs),
    /// Rainbow atom structures.
    #[command(subcommand)]
    Rainbow(build::RainbowCommand),
    /// Monk-style atom structures from labelled point configurations.
    #[command(subcommand)]
    Monk(build::MonkCommand),
    /// Basic matrices over a relation-algebra atom structure.
    Mat(build::MatArgs),
    /// Atomic network games.
    #[command(subcommand)]
    Game(play::GameCommand),
    /// Pebble game between two graphs.
    Ef(play::EfArgs),
    /// Games of increasing length, as in the Lyndon conditions.
    Lyndon(play::LyndonArgs),
    /// The representation game on a finite algebra.
    RepGame(play::RepGameArgs),
    /// Relativize quantifiers to a guard and check it against generalized semantics.
    Guard(logic::GuardArgs),
    /// Evaluate a formula under clique guarded semantics.
    CliqueEval(logic::CliqueArgs),
    /// Translate an equation into a loosely guarded sentence.
    Translate(logic::TranslateArgs),
    /// Write an object as JSON or DOT.
    Export(build::ExportArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Graph(_) => "graph",
            Command::Algebra(_) => "algebra check",
            Command::SetAlgebra(_) => "set-algebra",
            Command::Rainbow(_) => "rainbow build",
            Command::Monk(_) => "monk build",
            Command::Mat(_) => "mat",
            Command::Game(play::GameCommand::Solve(_)) => "game solve",
            Command::Game(play::GameCommand::Verify(_)) => "game verify",
            Command::Ef(_) => "ef",
            Command::Lyndon(_) => "lyndon",
            Command::RepGame(_) => "rep-game",
            Command::Guard(_) => "guard",
            Command::CliqueEval(_) => "clique-eval",
            Command::Translate(_) => "translate",
            Command::Export(_) => "export",
        }
    }

    fn run(&self, seed: u64) -> CliResult<Outcome> {
        match self {
            Command::Graph(a) => build::graph(a),
            Command::Algebra(build::AlgebraCommand::Check(a)) => build::algebra_check(a, seed),
            Command::SetAlgebra(a) => build::set_algebra(a),
            Command::Rainbow(build::RainbowCommand::Build(a)) => build::rainbow_build(a),
            Command::Monk(build::MonkCommand::Build(a)) => build::monk_build(a),
            Command::Mat(a) => build::mat(a),
            Command::Game(play::GameCommand::Solve(a)) => play::game_solve(a, seed),
            Command::Game(play::GameCommand::Verify(a)) => play::game_verify(a, seed),
            Command::Ef(a) => play::ef(a),
            Command::Lyndon(a) => play::lyndon(a, seed),
            Command::RepGame(a) => play::rep_game(a, seed),
            Command::Guard(a) => logic::guard(a, seed),
            Command::CliqueEval(a) => logic::clique_eval(a),
            Command::Translate(a) => logic::translate(a, seed),
            Command::Export(a) => build::export(a, seed),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global() {
            eprintln!("error: cannot configure {threads} threads: {e}");
            std::process::exit(2);
        }
    }
    let ctx = RunContext {
        command: cli.command.name().to_string(),
        config: serde_json::to_value(&cli.command).expect("arguments serialize"),
        seed: cli.seed,
    };
    let code = match cli.command.run(cli.seed) {
        Ok(outcome) => {
            if cli.json {
                print!("{}", to_json_text(&ctx.envelope(&outcome)));
            } else {
                println!("{}", outcome.verdict);
                for line in &outcome.lines {
                    println!("{line}");
                }
            }
            exit_code(outcome.status)
        }
        Err(e) => {
            if cli.json {
                print!("{}", to_json_text(&ctx.error_envelope(&e)));
            } else {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    };
    std::process::exit(code);
}
