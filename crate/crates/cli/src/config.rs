//! JSON run configuration.
//!
//! ```json
//! {
//!   "seed": 42,
//!   "law": {"branch": "frechet", "alpha": 1.0, "b": 2.0,
//!           "h": {"period": 0.6931471805599453, "level": 1.0, "harmonics": [[1, 0.1, 0.0]]}},
//!   "sample": {"what": "law", "n": 1000, "t": 1.0},
//!   "model": {"rho": 0.5, "burnIn": 0, "thin": 10, "n": 10000, "level": 0.01},
//!   "process": {"times": [0.5, 1.0, 2.0], "n": 5000, "bSamples": [0.5, 1.3, 2.0, 7.0]}
//! }
//! ```
//!
//! Only `seed` and `law` are required. Command-line flags take precedence.

use std::path::Path;

use maxsev_core::LawSpec;
use serde::Deserialize;

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub law: LawSpec,
    #[serde(default)]
    pub sample: SampleBlock,
    #[serde(default)]
    pub model: ModelBlock,
    #[serde(default)]
    pub process: ProcessBlock,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
pub struct SampleBlock {
    pub what: Option<String>,
    pub n: Option<usize>,
    pub t: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct ModelBlock {
    /// Overrides the top-level law as the stationary marginal.
    pub marginal: Option<LawSpec>,
    /// Defaults to `1/b` of the marginal.
    pub rho: Option<f64>,
    pub burn_in: usize,
    pub thin: usize,
    pub n: usize,
    pub level: f64,
}

impl Default for ModelBlock {
    fn default() -> Self {
        ModelBlock {
            marginal: None,
            rho: None,
            burn_in: 0,
            thin: maxsev_core::maxar::DEFAULT_THIN,
            n: 10_000,
            level: 0.01,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct ProcessBlock {
    pub times: Option<Vec<f64>>,
    pub n: usize,
    pub scale_b: Option<f64>,
    pub exponent_h: Option<f64>,
    pub b_samples: Vec<f64>,
    pub level: f64,
}

impl Default for ProcessBlock {
    fn default() -> Self {
        ProcessBlock {
            times: None,
            n: maxsev_core::process::DEFAULT_KS_SAMPLES,
            scale_b: None,
            exponent_h: None,
            b_samples: vec![0.5, 1.3, 2.0, 7.0],
            level: 0.05,
        }
    }
}

/// Reasons a configuration could not be loaded; all map to exit code 2.
#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Parse(serde_json::Error),
    Missing,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "cannot read config: {e}"),
            ConfigError::Parse(e) => write!(f, "cannot parse config: {e}"),
            ConfigError::Missing => f.write_str("--config PATH is required"),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(ConfigError::Parse)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let path = path.ok_or(ConfigError::Missing)?;
        let text = std::fs::read_to_string(path).map_err(ConfigError::Io)?;
        RunConfig::from_json(&text)
    }
}
