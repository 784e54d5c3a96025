//! Run configuration: defaults, an optional TOML file, then flags.

use std::path::Path;

use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub p: u32,
    pub f: usize,
    /// Absolute precision `m` of field elements.
    pub precision: i64,
    /// Series truncation `N`; `p³` when unset.
    pub trunc: Option<usize>,
    pub n_max: u32,
    pub guard: i64,
    pub seed: u64,
    pub json: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { p: 5, f: 1, precision: 20, trunc: None, n_max: 2, guard: 4, seed: 1, json: false }
    }
}

/// Keys accepted in a config file and on the command line.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub p: Option<u32>,
    pub f: Option<usize>,
    pub precision: Option<i64>,
    pub trunc: Option<usize>,
    pub nmax: Option<u32>,
    pub guard: Option<i64>,
    pub seed: Option<u64>,
    pub json: Option<bool>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Overrides, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(&self, c: &mut Config) {
        c.p = self.p.unwrap_or(c.p);
        c.f = self.f.unwrap_or(c.f);
        c.precision = self.precision.unwrap_or(c.precision);
        c.trunc = self.trunc.or(c.trunc);
        c.n_max = self.nmax.unwrap_or(c.n_max);
        c.guard = self.guard.unwrap_or(c.guard);
        c.seed = self.seed.unwrap_or(c.seed);
        c.json = self.json.unwrap_or(c.json);
    }
}

impl Config {
    /// Defaults, then the file, then flags.
    pub fn resolve(file: Option<&Overrides>, flags: &Overrides) -> Result<Config, CliError> {
        let mut c = Config::default();
        if let Some(f) = file {
            f.apply(&mut c);
        }
        flags.apply(&mut c);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.p < 3 || !(2..self.p).take_while(|d| d * d <= self.p).all(|d| self.p % d != 0) {
            return Err(CliError::Config(format!("p = {} must be an odd prime", self.p)));
        }
        if self.precision <= self.guard {
            return Err(CliError::Config(format!("precision {} must exceed guard {}", self.precision, self.guard)));
        }
        if self.f == 0 {
            return Err(CliError::Config("f must be positive".into()));
        }
        if self.n_max == 0 {
            return Err(CliError::Config("nmax must be at least 1".into()));
        }
        let p2 = (self.p * self.p) as usize;
        if let Some(n) = self.trunc {
            if n < p2 {
                return Err(CliError::Config(format!("trunc {n} must be at least p² = {p2}")));
            }
        }
        Ok(())
    }

    pub fn trunc_for(&self, p: u32) -> usize {
        self.trunc.unwrap_or((p as usize).pow(3))
    }
}
