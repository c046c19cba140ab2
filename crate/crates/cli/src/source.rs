//! Where an atom structure comes from: a file or one of the built-in constructions.

use crate::report::{input, read_json, CliResult};
use clap::{Args, ValueEnum};
use cylalg::algebra::{AtomStructure, AtomStructureJson};
use cylalg::games::{Certificate, MembershipCertificate};
use cylalg::graphs::{make_graph, Graph, GraphKind};
use cylalg::monk::{alpha_of_graph, basic_matrices_capped, monk_ca_atom_structure_capped, RaAtomStructure, RaJson, DEFAULT_MATRIX_CAP};
use cylalg::rainbow::{rainbow_atom_structure_capped, RainbowSig, RainbowStructure, DEFAULT_ATOM_CAP};
use cylalg::set_algebra::{full_space, ops_on, union_of_squares, SetAlgebra};
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Parameters that rebuild a plain rainbow structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowParams {
    pub dim: usize,
    pub greens: usize,
    pub reds: usize,
}

impl RainbowParams {
    pub fn build(&self, cap: usize) -> CliResult<RainbowStructure> {
        Ok(rainbow_atom_structure_capped(&RainbowSig::new(self.dim, self.greens, self.reds)?, cap)?)
    }
}

/// On-disk atom structure, with the rainbow parameters when it came from that construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureFile {
    #[serde(flatten)]
    pub structure: AtomStructureJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rainbow: Option<RainbowParams>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// `--structure FILE`.
    Structure,
    /// Set algebra on `--base` points in `--dim` dimensions, optionally a union of `--squares`.
    Set,
    /// Rainbow structure from `--dim`, `--greens`, `--reds`.
    Rainbow,
    /// Configurations over `--graph` with `--colours`, in `--dim` dimensions.
    Monk,
    /// Basic matrices of the graph's relation-algebra atom structure (or `--ra FILE`).
    Mat,
    /// Random structure with `--atoms` atoms and `--density`, drawn from the seed.
    Random,
}

#[derive(Args, Clone, Debug, Default, Serialize)]
pub struct AlgebraSource {
    #[arg(long, value_enum)]
    pub from: Option<Source>,
    #[arg(long)]
    pub structure: Option<PathBuf>,
    #[arg(long)]
    pub base: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Bases of the squares in the unit, e.g. `0,1;1,2`.
    #[arg(long)]
    pub squares: Option<String>,
    #[arg(long)]
    pub greens: Option<usize>,
    #[arg(long)]
    pub reds: Option<usize>,
    /// Graph spec: `complete:n`, `cycle:k`, `cliques:count,size` or `band:nodes,width`.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub colours: Option<usize>,
    /// Relation-algebra atom structure file for `--from mat`.
    #[arg(long)]
    pub ra: Option<PathBuf>,
    #[arg(long)]
    pub atoms: Option<usize>,
    #[arg(long)]
    pub density: Option<f64>,
    /// Most atoms a construction may produce.
    #[arg(long)]
    pub cap: Option<usize>,
}

pub struct Loaded {
    pub structure: AtomStructure,
    pub rainbow: Option<RainbowParams>,
}

fn need<T: Copy>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| input(format!("missing --{flag}")))
}

pub fn parse_graph(spec: &str) -> CliResult<Graph> {
    Ok(make_graph(spec.parse::<GraphKind>()?)?)
}

pub fn parse_squares(text: &str) -> CliResult<Vec<Vec<usize>>> {
    text.split(';')
        .map(|part| part.split(',').map(|x| x.trim().parse::<usize>().map_err(|e| input(format!("bad square {part:?}: {e}")))).collect())
        .collect()
}

pub fn load_structure_file(path: &Path) -> CliResult<(AtomStructure, Option<RainbowParams>)> {
    let file: StructureFile = read_json(path)?;
    Ok((AtomStructure::from_json(&file.structure)?, file.rainbow))
}

pub fn ra_for(source: &AlgebraSource) -> CliResult<RaAtomStructure> {
    match (&source.ra, &source.graph) {
        (Some(path), _) => Ok(RaAtomStructure::from_json(&read_json::<RaJson>(path)?)?),
        (None, Some(g)) => Ok(alpha_of_graph(&parse_graph(g)?, need(source.colours, "colours")?)?),
        (None, None) => Err(input("need --graph or --ra")),
    }
}

pub fn set_algebra_for(source: &AlgebraSource) -> CliResult<SetAlgebra> {
    let base = need(source.base, "base")?;
    let dim = need(source.dim, "dim")?;
    let space = match &source.squares {
        Some(text) => union_of_squares(base, dim, &parse_squares(text)?)?,
        None => full_space(base, dim)?,
    };
    Ok(ops_on(&space))
}

impl AlgebraSource {
    pub fn load(&self, seed: u64) -> CliResult<Loaded> {
        let from = match (self.from, &self.structure) {
            (Some(f), _) => f,
            (None, Some(_)) => Source::Structure,
            (None, None) => return Err(input("need --from or --structure")),
        };
        let plain = |structure| Loaded { structure, rainbow: None };
        match from {
            Source::Structure => {
                let path = self.structure.as_ref().ok_or_else(|| input("missing --structure"))?;
                let (structure, rainbow) = load_structure_file(path)?;
                Ok(Loaded { structure, rainbow })
            }
            Source::Set => {
                let set = set_algebra_for(self)?;
                Ok(plain(set.algebra.structure().clone()))
            }
            Source::Rainbow => {
                let params = RainbowParams { dim: need(self.dim, "dim")?, greens: need(self.greens, "greens")?, reds: need(self.reds, "reds")? };
                let rs = params.build(self.cap.unwrap_or(DEFAULT_ATOM_CAP))?;
                Ok(Loaded { structure: rs.structure, rainbow: Some(params) })
            }
            Source::Monk => {
                let g = parse_graph(self.graph.as_deref().ok_or_else(|| input("missing --graph"))?)?;
                let cs = monk_ca_atom_structure_capped(
                    &g,
                    need(self.colours, "colours")?,
                    need(self.dim, "dim")?,
                    self.cap.unwrap_or(DEFAULT_MATRIX_CAP),
                )?;
                Ok(plain(cs.structure))
            }
            Source::Mat => {
                let ms = basic_matrices_capped(&ra_for(self)?, need(self.dim, "dim")?, self.cap.unwrap_or(DEFAULT_MATRIX_CAP))?;
                Ok(plain(ms.structure))
            }
            Source::Random => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let structure = AtomStructure::random(&mut rng, need(self.dim, "dim")?, need(self.atoms, "atoms")?, self.density.unwrap_or(0.5));
                Ok(plain(structure))
            }
        }
    }
}

pub fn structure_file(structure: &AtomStructure, rainbow: Option<RainbowParams>) -> StructureFile {
    StructureFile { structure: structure.to_json(), rainbow }
}

/// Either a game certificate or a claim about the algebra backed by one.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyCertificate {
    Game(Certificate),
    Membership(MembershipCertificate),
}
