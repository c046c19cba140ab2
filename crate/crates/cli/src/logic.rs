//! Guard translation, clique guarded evaluation and the equation-to-sentence translation.

use crate::report::{input, read_file, CliResult, Outcome, Status};
use crate::source::parse_squares;
use clap::Args;
use cylalg::logic::random::{random_admissible, random_formula, random_model};
use cylalg::logic::{
    clique_guarded_eval, eval, eval_generalized, expand_with_guard, guard_translate, holds, loose_guard_violation, loosely_guarded_translate,
    sentence_holds, translation_model, AlgebraModel, FiniteModel, Formula, QfFormula,
};
use cylalg::set_algebra::{full_space, ops_on, union_of_squares};
use cylalg::AtomSet;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

fn parse_assignment(text: &str) -> CliResult<Vec<usize>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|x| x.trim().parse().map_err(|e| input(format!("bad assignment {text:?}: {e}")))).collect()
}

fn parse_formula(text: &str) -> CliResult<Formula> {
    Ok(text.parse::<Formula>()?)
}

fn load_model(path: &PathBuf) -> CliResult<FiniteModel> {
    Ok(FiniteModel::from_json(&read_file(path)?)?)
}

#[derive(Args, Debug, Serialize)]
pub struct GuardArgs {
    /// Formula as an s-expression, e.g. `(exists v1 (and (R v0 v1) (= v0 v1)))`.
    #[arg(long, required_unless_present = "random")]
    pub formula: Option<String>,
    /// Model JSON whose `admissible` field lists the assignments.
    #[arg(long, required_unless_present = "random")]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Relation symbol interpreted as the admissible set.
    #[arg(long, default_value = "G")]
    pub guard: String,
    /// Comma-separated values of the variables, e.g. `0,1,0`.
    #[arg(long, default_value = "")]
    pub assignment: String,
    /// Check this many seeded random instances instead of a single one.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub max_universe: usize,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
}

pub fn guard(a: &GuardArgs, seed: u64) -> CliResult<Outcome> {
    if let Some(count) = a.random {
        return guard_random(a, count, seed);
    }
    let (Some(text), Some(path)) = (&a.formula, &a.model) else {
        return Err(input("need --formula and --model"));
    };
    let phi = parse_formula(text)?;
    let model = load_model(path)?;
    let admissible = model.admissible.clone().ok_or_else(|| input("model has no admissible assignments"))?;
    let s = parse_assignment(&a.assignment)?;
    let guarded = guard_translate(&phi, &a.guard, a.dim)?;
    let expanded = expand_with_guard(&model, &admissible, &a.guard)?;
    let generalized = eval_generalized(&model, &admissible, &s, &phi)?;
    let classical = eval(&expanded, &s, &guarded)?;
    let agree = generalized == classical;
    Ok(Outcome::new(
        if agree { "agree" } else { "disagree" },
        if agree { Status::Ok } else { Status::CheckFailed },
        json!({
            "translation": guarded.to_string(),
            "generalized": generalized,
            "classical": classical,
        }),
    )
    .line(format!("translation {guarded}"))
    .line(format!("generalized {generalized} classical {classical}")))
}

fn guard_random(a: &GuardArgs, count: usize, seed: u64) -> CliResult<Outcome> {
    if a.dim == 0 || a.max_universe == 0 {
        return Err(input("--dim and --max-universe must be positive"));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let signature = vec![("P".to_string(), 1), ("R".to_string(), 2), ("S".to_string(), a.dim)];
    let mut disagreements = Vec::new();
    for index in 0..count {
        let universe = rng.gen_range(1..=a.max_universe);
        let model = random_model(&mut rng, universe, &signature, 0.4)?;
        let admissible = random_admissible(&mut rng, universe, a.dim, 0.5);
        let depth = rng.gen_range(0..=a.depth);
        let phi = random_formula(&mut rng, &signature, a.dim, depth);
        let picked = rng.gen_range(0..admissible.len());
        let s = admissible.iter().nth(picked).expect("in range").clone();
        let generalized = eval_generalized(&model, &admissible, &s, &phi)?;
        let classical = eval(&expand_with_guard(&model, &admissible, &a.guard)?, &s, &guard_translate(&phi, &a.guard, a.dim)?)?;
        if generalized != classical {
            disagreements.push(json!({ "instance": index, "formula": phi.to_string(), "assignment": s }));
        }
    }
    let ok = disagreements.is_empty();
    Ok(Outcome::new(
        if ok { "agree" } else { "disagree" },
        if ok { Status::Ok } else { Status::CheckFailed },
        json!({
            "instances": count,
            "disagreements": disagreements,
        }),
    )
    .line(format!("{count} instances, {} disagreements", disagreements.len()))
    .budgets(json!({ "instances": count, "max_universe": a.max_universe, "depth": a.depth })))
}

#[derive(Args, Debug, Serialize)]
pub struct CliqueArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub formula: String,
    #[arg(long, default_value = "")]
    pub assignment: String,
    /// Dimension: cliques are sets all of whose `n`-element subsets are covered by the unit relation `1`.
    #[arg(long)]
    pub n: usize,
}

pub fn clique_eval(a: &CliqueArgs) -> CliResult<Outcome> {
    let model = load_model(&a.model)?;
    let phi = parse_formula(&a.formula)?;
    let s = parse_assignment(&a.assignment)?;
    let value = clique_guarded_eval(&model, &s, &phi, a.n)?;
    Ok(Outcome::new(value.to_string(), Status::Ok, json!({ "value": value })))
}

#[derive(Args, Debug, Serialize)]
pub struct TranslateArgs {
    /// Equation or Boolean combination of equations, e.g. `(= (c 0 x) (c 0 (c 0 x)))`.
    #[arg(long)]
    pub equation: String,
    #[arg(long)]
    pub dim: usize,
    /// Also evaluate both sides on the set algebra over this many points.
    #[arg(long)]
    pub base: Option<usize>,
    /// Unit as a union of squares, e.g. `0,1;1,2`, when `--base` is given.
    #[arg(long)]
    pub squares: Option<String>,
    /// Random variable bindings tried with `--base`.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

pub fn translate(a: &TranslateArgs, seed: u64) -> CliResult<Outcome> {
    let q: QfFormula = a.equation.parse()?;
    let sentence = loosely_guarded_translate(&q, a.dim)?;
    let violation = loose_guard_violation(&sentence);
    let mut result = json!({ "sentence": sentence.to_string(), "loosely_guarded": violation.is_none(), "violation": violation });
    let mut outcome_lines = vec![sentence.to_string()];
    outcome_lines.push(match &violation {
        None => "loosely guarded".to_string(),
        Some(v) => format!("not loosely guarded: {v}"),
    });
    let mut ok = violation.is_none();
    if let Some(base) = a.base {
        let space = match &a.squares {
            Some(text) => union_of_squares(base, a.dim, &parse_squares(text)?)?,
            None => full_space(base, a.dim)?,
        };
        let set = ops_on(&space);
        let model = AlgebraModel::from_set_algebra(&set);
        let names: BTreeSet<String> = q.variables();
        let k = set.algebra.atom_count();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut mismatches = 0;
        for _ in 0..a.samples {
            let binding: BTreeMap<String, AtomSet> =
                names.iter().map(|n| (n.clone(), AtomSet::from_atoms(k, (0..k).filter(|_| rng.gen_bool(0.5))))).collect();
            let algebraic = holds(&set, &binding, &q)?;
            let logical = sentence_holds(&translation_model(&model, &binding)?, &sentence)?;
            if algebraic != logical {
                mismatches += 1;
            }
        }
        outcome_lines.push(format!("{} bindings, {mismatches} mismatches", a.samples));
        result["mismatches"] = json!(mismatches);
        ok &= mismatches == 0;
    }
    let mut outcome = Outcome::new(if ok { "ok" } else { "fail" }, if ok { Status::Ok } else { Status::CheckFailed }, result);
    outcome.lines = outcome_lines;
    Ok(outcome)
}
