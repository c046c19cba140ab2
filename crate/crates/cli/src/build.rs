//! Constructions, algebra-level checks and export.

use crate::report::{input, read_file, read_json, to_json_text, write_file, CliResult, Outcome, Status};
use crate::source::{parse_graph, parse_squares, ra_for, structure_file, AlgebraSource, AnyCertificate, RainbowParams};
use clap::{Args, Subcommand, ValueEnum};
use cylalg::algebra::{check_ca_axioms_with, complex_algebra, iso_atom_structures, CheckMode};
use cylalg::graphs::{chromatic_number, girth};
use cylalg::logic::FiniteModel;
use cylalg::monk::{basic_matrices_capped, monk_ca_atom_structure_capped, DEFAULT_MATRIX_CAP};
use cylalg::rainbow::DEFAULT_ATOM_CAP;
use cylalg::set_algebra::{full_space, ops_on, union_of_squares, unit_closure_kind};
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Dot,
}

#[derive(Args, Debug, Serialize)]
pub struct GraphArgs {
    /// `complete:n`, `cycle:k`, `cliques:count,size` or `band:nodes,width`.
    #[arg(long)]
    pub spec: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn graph(a: &GraphArgs) -> CliResult<Outcome> {
    let g = parse_graph(&a.spec)?;
    let chi = chromatic_number(&g);
    let gi = girth(&g);
    let mut outcome = Outcome::new(
        "ok",
        Status::Ok,
        json!({
            "nodes": g.node_count(),
            "edges": g.edge_count(),
            "chromatic_number": chi,
            "girth": gi.to_string(),
        }),
    )
    .line(format!("nodes {} edges {} chromatic {chi} girth {gi}", g.node_count(), g.edge_count()));
    if let Some(out) = &a.out {
        let text = match a.format {
            Format::Json => to_json_text(&g.to_json()),
            Format::Dot => g.to_dot(),
        };
        outcome = outcome.line(format!("wrote {}", write_file(out, &text)?.display()));
    }
    Ok(outcome)
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraCommand {
    /// Check the cylindric-algebra axioms on the complex algebra.
    Check(AlgebraCheckArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct AlgebraCheckArgs {
    #[command(flatten)]
    pub source: AlgebraSource,
    /// Also enumerate every element (small algebras only).
    #[arg(long)]
    pub exhaustive: bool,
}

pub fn algebra_check(a: &AlgebraCheckArgs, seed: u64) -> CliResult<Outcome> {
    let loaded = a.source.load(seed)?;
    let algebra = complex_algebra(loaded.structure);
    let mode = if a.exhaustive { CheckMode::Exhaustive } else { CheckMode::Atoms };
    let report = check_ca_axioms_with(&algebra, mode);
    let passed = report.all_passed();
    let lines: Vec<String> = report
        .results
        .iter()
        .map(|r| {
            let mark = if r.passed { "pass" } else { "FAIL" };
            match &r.witness {
                Some(w) => format!("{} {mark} {}: indices {:?}, {}", r.axiom, r.law, w.indices, w.detail),
                None => format!("{} {mark} {}", r.axiom, r.law),
            }
        })
        .collect();
    let (verdict, status) = if passed { ("pass", Status::Ok) } else { ("fail", Status::CheckFailed) };
    let mut outcome = Outcome::new(verdict, status, &report);
    outcome.lines = lines;
    Ok(outcome)
}

#[derive(Args, Debug, Serialize)]
pub struct SetAlgebraArgs {
    #[arg(long)]
    pub base: usize,
    #[arg(long)]
    pub dim: usize,
    /// Unit as a union of squares over these bases, e.g. `0,1;1,2`; the full space otherwise.
    #[arg(long)]
    pub squares: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn set_algebra(a: &SetAlgebraArgs) -> CliResult<Outcome> {
    let space = match &a.squares {
        Some(text) => union_of_squares(a.base, a.dim, &parse_squares(text)?)?,
        None => full_space(a.base, a.dim)?,
    };
    let kinds = unit_closure_kind(&space);
    let set = ops_on(&space);
    let structure = set.algebra.structure();
    let mut outcome = Outcome::new(
        "ok",
        Status::Ok,
        json!({
            "sequences": space.len(),
            "atoms": structure.atom_count(),
            "full": space.is_full(),
            "closure": kinds,
        }),
    )
    .line(format!("unit has {} sequences, full: {}", space.len(), space.is_full()))
    .line(format!("closure: {}", serde_json::to_string(&kinds).expect("serializable")));
    if let Some(out) = &a.out {
        let path = write_file(out, &to_json_text(&structure_file(structure, None)))?;
        outcome = outcome.line(format!("wrote {}", path.display()));
    }
    Ok(outcome)
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RainbowCommand {
    /// Enumerate the rainbow atoms and write the atom structure.
    Build(RainbowArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct RainbowArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub greens: usize,
    #[arg(long)]
    pub reds: usize,
    #[arg(long, default_value_t = DEFAULT_ATOM_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn rainbow_build(a: &RainbowArgs) -> CliResult<Outcome> {
    let params = RainbowParams { dim: a.dim, greens: a.greens, reds: a.reds };
    let rs = params.build(a.cap)?;
    let mut outcome = Outcome::new("ok", Status::Ok, json!({ "atoms": rs.structure.atom_count(), "params": params }))
        .line(format!("{} atoms", rs.structure.atom_count()))
        .budgets(json!({ "atoms": a.cap }));
    if let Some(out) = &a.out {
        let path = write_file(out, &to_json_text(&structure_file(&rs.structure, Some(params))))?;
        outcome = outcome.line(format!("wrote {}", path.display()));
    }
    Ok(outcome)
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonkCommand {
    /// Atom structure on labelled point configurations over a graph.
    Build(MonkArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct MonkArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = 3)]
    pub colours: usize,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = DEFAULT_MATRIX_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn monk_build(a: &MonkArgs) -> CliResult<Outcome> {
    let cs = monk_ca_atom_structure_capped(&parse_graph(&a.graph)?, a.colours, a.dim, a.cap)?;
    let mut outcome = Outcome::new("ok", Status::Ok, json!({ "atoms": cs.structure.atom_count() }))
        .line(format!("{} atoms", cs.structure.atom_count()))
        .budgets(json!({ "atoms": a.cap }));
    if let Some(out) = &a.out {
        let path = write_file(out, &to_json_text(&structure_file(&cs.structure, None)))?;
        outcome = outcome.line(format!("wrote {}", path.display()));
    }
    Ok(outcome)
}

#[derive(Args, Debug, Serialize)]
pub struct MatArgs {
    /// Graph whose relation-algebra atom structure supplies the matrix entries.
    #[arg(long)]
    pub graph: Option<String>,
    /// Relation-algebra atom structure file instead of a graph.
    #[arg(long)]
    pub ra: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub colours: usize,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = DEFAULT_MATRIX_CAP)]
    pub cap: usize,
    /// Compare with the point-configuration structure over the same graph.
    #[arg(long)]
    pub iso: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn mat(a: &MatArgs) -> CliResult<Outcome> {
    let source = AlgebraSource { graph: a.graph.clone(), ra: a.ra.clone(), colours: Some(a.colours), ..AlgebraSource::default() };
    let ms = basic_matrices_capped(&ra_for(&source)?, a.dim, a.cap)?;
    let atoms = ms.structure.atom_count();
    let mut outcome = Outcome::new("ok", Status::Ok, json!({ "atoms": atoms })).line(format!("{atoms} basic matrices"));
    if a.iso {
        let g = a.graph.as_deref().ok_or_else(|| input("--iso needs --graph"))?;
        let cs = monk_ca_atom_structure_capped(&parse_graph(g)?, a.colours, a.dim, a.cap)?;
        let iso = iso_atom_structures(&cs.structure, &ms.structure);
        let found = iso.is_some();
        outcome = Outcome::new(
            if found { "isomorphic" } else { "not-isomorphic" },
            if found { Status::Ok } else { Status::CheckFailed },
            json!({
                "atoms": atoms,
                "configurations": cs.structure.atom_count(),
                "isomorphism": iso,
            }),
        )
        .line(format!("{atoms} basic matrices, {} configurations", cs.structure.atom_count()));
    }
    if let Some(out) = &a.out {
        let path = write_file(out, &to_json_text(&structure_file(&ms.structure, None)))?;
        outcome = outcome.line(format!("wrote {}", path.display()));
    }
    Ok(outcome.budgets(json!({ "atoms": a.cap })))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportKind {
    Graph,
    Structure,
    Certificate,
    Model,
    Ra,
}

#[derive(Args, Debug, Serialize)]
pub struct ExportArgs {
    #[arg(long, value_enum)]
    pub kind: ExportKind,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// File holding the object, for certificates and models.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub source: AlgebraSource,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn export(a: &ExportArgs, seed: u64) -> CliResult<Outcome> {
    let need_input = || a.input.as_ref().ok_or_else(|| input("missing --input"));
    let text = match (a.kind, a.format) {
        (ExportKind::Graph, format) => {
            let g = parse_graph(a.source.graph.as_deref().ok_or_else(|| input("missing --graph"))?)?;
            match format {
                Format::Json => to_json_text(&g.to_json()),
                Format::Dot => g.to_dot(),
            }
        }
        (ExportKind::Structure, Format::Json) => {
            let loaded = a.source.load(seed)?;
            to_json_text(&structure_file(&loaded.structure, loaded.rainbow))
        }
        (ExportKind::Certificate, Format::Json) => to_json_text(&read_json::<AnyCertificate>(need_input()?)?),
        (ExportKind::Model, Format::Json) => {
            let mut text = FiniteModel::from_json(&read_file(need_input()?)?)?.to_json();
            text.push('\n');
            text
        }
        (ExportKind::Ra, Format::Json) => to_json_text(&ra_for(&a.source)?.to_json()),
        (kind, format) => {
            let name = |v: serde_json::Value| v.as_str().unwrap_or_default().to_string();
            return Err(input(format!(
                "cannot export {} as {}",
                name(serde_json::to_value(kind).expect("serializable")),
                name(serde_json::to_value(format).expect("serializable"))
            )));
        }
    };
    let path = write_file(&a.out, &text)?;
    Ok(Outcome::new("ok", Status::Ok, json!({ "path": path, "bytes": text.len() })).line(format!("wrote {}", path.display())))
}
