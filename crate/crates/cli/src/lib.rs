//! Library half of the `unorm` command: file formats, configuration, the
//! rank tables and the `verify` suites.

pub mod config;
pub mod json;
pub mod report;
pub mod suites;
pub mod table;

use unorm_analytic::AnalyticError;
use unorm_padic::PadicError;
use unorm_phimod::{FilteredPhiModule, PhiModError};
use unorm_series::SeriesError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("{0}")]
    Io(String),
    #[error("config: {0}")]
    Config(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    PhiMod(#[from] PhiModError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

/// Preset module files shipped with the binary.
pub const PRESET_FILES: [(&str, &str); 5] = [
    ("supersingular", include_str!("../presets/supersingular.json")),
    ("ordinary", include_str!("../presets/ordinary.json")),
    ("weight4", include_str!("../presets/weight4.json")),
    ("qp1", include_str!("../presets/qp1.json")),
    ("ordinary-eigenline", include_str!("../presets/ordinary-eigenline.json")),
];

pub fn load_preset(name: &str, prec: i64, guard: i64) -> Result<FilteredPhiModule, CliError> {
    let (_, text) = PRESET_FILES.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let known: Vec<&str> = PRESET_FILES.iter().map(|(n, _)| *n).collect();
        CliError::Usage(format!("unknown preset {name:?}; known: {}", known.join(", ")))
    })?;
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Io(format!("preset {name}: {e}")))?;
    json::parse_module(&v, prec, guard)
}

/// Reads a module from a path, or from `preset:NAME`.
pub fn load_module(src: &str, prec: i64, guard: i64) -> Result<FilteredPhiModule, CliError> {
    if let Some(name) = src.strip_prefix("preset:") {
        return load_preset(name, prec, guard);
    }
    let v = read_json(src)?;
    json::parse_module(&v, prec, guard)
}

pub fn read_json(path: &str) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema { path: path.to_string(), msg: format!("invalid JSON: {e}") })
}
