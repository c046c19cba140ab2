use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub const RUN_SCHEMA: &str = "cylalg/run/1";
/// Relative output paths resolve against this directory when it is set.
pub const OUT_DIR_VAR: &str = "CYLALG_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] cylalg::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(cylalg::Error::ResourceLimit { .. }) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Library(cylalg::Error::ResourceLimit { .. }) => "resource-limit",
            CliError::Library(cylalg::Error::Parse { .. }) => "parse",
            CliError::Library(cylalg::Error::Precondition(_)) => "precondition",
            CliError::Io { .. } => "io",
            _ => "invalid-argument",
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// How a finished run maps onto the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
    Unknown,
}

/// What a subcommand hands back: a verdict word, machine-readable details and text lines.
pub struct Outcome {
    pub verdict: String,
    pub status: Status,
    pub result: Value,
    pub lines: Vec<String>,
    pub budgets: Value,
}

impl Outcome {
    pub fn new(verdict: impl Into<String>, status: Status, result: impl Serialize) -> Self {
        Outcome {
            verdict: verdict.into(),
            status,
            result: serde_json::to_value(result).expect("results serialize"),
            lines: Vec::new(),
            budgets: json!({}),
        }
    }

    pub fn line(mut self, text: impl Into<String>) -> Self {
        self.lines.push(text.into());
        self
    }

    pub fn budgets(mut self, budgets: Value) -> Self {
        self.budgets = budgets;
        self
    }
}

pub struct RunContext {
    pub command: String,
    pub config: Value,
    pub seed: u64,
}

impl RunContext {
    pub fn config_hash(&self) -> String {
        let canonical = serde_json::to_vec(&json!({ "command": self.command, "config": self.config, "seed": self.seed })).expect("serializable");
        hex::encode(Sha256::digest(canonical))
    }

    fn header(&self) -> serde_json::Map<String, Value> {
        let mut map = serde_json::Map::new();
        map.insert("schema".into(), json!(RUN_SCHEMA));
        map.insert("tool".into(), json!(env!("CARGO_PKG_NAME")));
        map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        map.insert("command".into(), json!(self.command));
        map.insert("config".into(), self.config.clone());
        map.insert("config_hash".into(), json!(self.config_hash()));
        map.insert("seed".into(), json!(self.seed));
        map
    }

    pub fn envelope(&self, outcome: &Outcome) -> Value {
        let mut map = self.header();
        map.insert("budgets".into(), outcome.budgets.clone());
        map.insert("verdict".into(), json!(outcome.verdict));
        map.insert("result".into(), outcome.result.clone());
        Value::Object(map)
    }

    pub fn error_envelope(&self, error: &CliError) -> Value {
        let mut map = self.header();
        map.insert("budgets".into(), json!({}));
        let verdict = if error.exit_code() == 3 { "unknown" } else { "error" };
        map.insert("verdict".into(), json!(verdict));
        map.insert("error".into(), json!({ "kind": error.kind(), "message": error.to_string() }));
        Value::Object(map)
    }
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Ok => 0,
        Status::CheckFailed => 1,
        Status::Unknown => 3,
    }
}

pub fn out_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<PathBuf> {
    let path = out_path(path);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|source| CliError::Io { path: parent.to_path_buf(), source })?;
    }
    std::fs::write(&path, contents).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read_file(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline, stable for fixed inputs.
pub fn to_json_text<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}
