//! Run configuration: command-line flags layered over an optional JSON file.

use std::path::Path;

use serde::Deserialize;

use crate::CliError;

pub const SEED_ENV: &str = "BERGMAN_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Mirrors the flags; every field is optional and a flag on the command
/// line wins over the file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub degree: Option<u32>,
    pub m_max: Option<u32>,
    pub k_max: Option<usize>,
    pub degrees: Option<Vec<u32>>,
    pub thresholds: Option<Vec<f64>>,
    pub tolerance: Option<f64>,
    pub nodes: Option<usize>,
    pub radius_factor: Option<f64>,
    pub samples: Option<usize>,
    pub pairs: Option<usize>,
    pub format: Option<Format>,
    pub sequential: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("malformed config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("n", self.n.map(|v| v as u64)),
            ("m_max", self.m_max.map(u64::from)),
            ("nodes", self.nodes.map(|v| v as u64)),
            ("samples", self.samples.map(|v| v as u64)),
            ("pairs", self.pairs.map(|v| v as u64)),
        ];
        for (name, v) in positive {
            if v == Some(0) {
                return Err(CliError::Usage(format!("config field {name} must be positive")));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::Usage("config tolerance must lie in (0, 1)".into()));
            }
        }
        if let Some(r) = self.radius_factor {
            if !(r > 0.0) {
                return Err(CliError::Usage("config radius_factor must be positive".into()));
            }
        }
        Ok(())
    }

    /// Flag, then config file, then the environment, then the default.
    pub fn resolve_seed(&self, flag: Option<u64>) -> Result<u64, CliError> {
        if let Some(s) = flag.or(self.seed) {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV} is not an unsigned integer: {v:?}"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }
}

/// `flag`, else the config value, else `default`.
pub fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}
