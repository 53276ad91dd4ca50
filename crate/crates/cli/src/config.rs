//! Run configuration with layered precedence:
//! defaults, then `--config <file>`, then the file named by `ZGB_CONFIG`,
//! then explicit command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Numeric precision the run is asked for. Only `standard` (binary64)
/// is built; `extended` parses so configs stay forward-compatible but is
/// rejected when a run actually starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Standard,
    Extended,
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Standard => write!(f, "standard"),
            Precision::Extended => write!(f, "extended"),
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(Precision::Standard),
            "extended" => Ok(Precision::Extended),
            other => Err(format!(
                "unknown precision '{other}' (expected 'standard' or 'extended')"
            )),
        }
    }
}

/// Fully resolved configuration for one command invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Arithmetic width; `standard` is binary64.
    pub precision: Precision,
    /// Default evaluation tolerance.
    pub tol: f64,
    /// Largest even Bernoulli index tabulated (B_0 .. B_depth).
    pub bernoulli_depth: u32,
    /// Seed for the randomized verification grids.
    pub seed: u64,
    /// Directory output files are written into.
    pub output_dir: PathBuf,
    /// Cap on the quadrature grid size the stability loop may reach.
    pub k_max: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision: Precision::Standard,
            tol: 1e-10,
            bernoulli_depth: 64,
            seed: 2026,
            output_dir: PathBuf::from("."),
            k_max: 8192,
        }
    }
}

/// One configuration layer; every field optional so layers can overlay.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub precision: Option<String>,
    pub tol: Option<f64>,
    pub bernoulli_depth: Option<u32>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub k_max: Option<u32>,
}

impl RunConfig {
    fn apply(&mut self, layer: ConfigLayer) -> Result<(), CliError> {
        if let Some(p) = layer.precision {
            self.precision = p.parse().map_err(CliError::Usage)?;
        }
        if let Some(t) = layer.tol {
            self.tol = t;
        }
        if let Some(d) = layer.bernoulli_depth {
            self.bernoulli_depth = d;
        }
        if let Some(s) = layer.seed {
            self.seed = s;
        }
        if let Some(o) = layer.output_dir {
            self.output_dir = o;
        }
        if let Some(k) = layer.k_max {
            self.k_max = k;
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.precision == Precision::Extended {
            return Err(CliError::Usage(
                "precision 'extended' is accepted in configuration files for forward \
                 compatibility but this build provides only 'standard' (binary64)"
                    .into(),
            ));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(CliError::Usage(format!(
                "tol must be a finite positive number, got {}",
                self.tol
            )));
        }
        if self.bernoulli_depth == 0 || !self.bernoulli_depth.is_multiple_of(2) || self.bernoulli_depth > 1024
        {
            return Err(CliError::Usage(format!(
                "bernoulli_depth must be an even index in [2, 1024], got {}",
                self.bernoulli_depth
            )));
        }
        if self.k_max < 64 || !self.k_max.is_multiple_of(4) {
            return Err(CliError::Usage(format!(
                "k_max must be a multiple of 4 and at least 64, got {}",
                self.k_max
            )));
        }
        Ok(())
    }
}

fn load_layer(path: &Path) -> Result<ConfigLayer, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    match ext.as_str() {
        "toml" => toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid TOML in {}: {e}", path.display()))),
        "json" => serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid JSON in {}: {e}", path.display()))),
        other => Err(CliError::Usage(format!(
            "config file {} has unsupported extension '{other}' (use .toml or .json)",
            path.display()
        ))),
    }
}

/// Resolves the effective configuration. `flag_layer` carries the
/// explicit command-line overrides and wins over everything.
pub fn resolve(config_flag: Option<&Path>, flag_layer: ConfigLayer) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = config_flag {
        cfg.apply(load_layer(path)?)?;
    }
    if let Some(env_path) = std::env::var_os("ZGB_CONFIG") {
        if !env_path.is_empty() {
            cfg.apply(load_layer(Path::new(&env_path))?)?;
        }
    }
    cfg.apply(flag_layer)?;
    cfg.validate()?;
    Ok(cfg)
}
