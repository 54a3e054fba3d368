//! Input file schemas and parsing; all rationals are exact strings.

use serde::{Deserialize, Serialize};
use std::path::Path;

use valdiff_core::descriptor::{RawExtension, RawField, RawLevel, RawTower};

/// The exit classes of the tool: io and parse failures exit 3, semantic
/// descriptor failures 4.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Semantic(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "io: {m}"),
            CliError::Parse(m) => write!(f, "parse: {m}"),
            CliError::Semantic(m) => write!(f, "descriptor: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 3,
            CliError::Parse(_) => 3,
            CliError::Semantic(_) => 4,
        }
    }
}

/// classify: one or more `[[extension]]` blocks.
#[derive(Debug, Deserialize)]
pub struct ClassifyFile {
    pub extension: Vec<RawExtension>,
}

/// check-dr: field descriptor at top level.
pub type FieldFile = RawField;

/// classify-tower: `[[step]]` blocks.
pub type TowerFile = RawTower;

/// oracle-verify: a generated batch and optional explicit relations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleFile {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub count: usize,
    #[serde(default)]
    pub relation: Vec<RawRelation>,
}

fn default_seed() -> u64 {
    0
}

/// An explicit relation over the prime field: terms are (coefficient,
/// exponent) pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawRelation {
    /// artin-schreier | kummer
    pub kind: String,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub group: Vec<RawLevel>,
    /// terms of the right-hand side b
    pub b: Vec<RawTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawTerm {
    pub coeff: u64,
    pub exp: Vec<String>,
}

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn parse_toml<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}
