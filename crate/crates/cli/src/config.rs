//! Config-file parsing and flag/file/default resolution.
//!
//! Config files are plain `key=value` lines (UTF-8, `#` comments, blank
//! lines ignored). Run manifests emit their resolved configuration in this
//! exact format, so a manifest can be fed straight back through `--config`
//! to reproduce a run.

use std::path::Path;

use anyhow::{bail, Context, Result};

/// Values read from a `--config` file; every field is optional and loses to
/// an explicit flag but beats the built-in default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub sigma2_theta: Option<f64>,
    pub sigma2_phi: Option<f64>,
    pub sigma2z_grid: Option<Vec<f64>>,
    pub delta_grid: Option<Vec<f64>>,
    pub rho: Option<Vec<f64>>,
    pub delta_k: Option<Vec<f64>>,
    pub tolerance: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ConfigFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key=value, got {line:?}", lineno + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            let ctx = |what: &str| format!("line {}: invalid {what} for key {key}", lineno + 1);
            match key {
                "n" => cfg.n = Some(value.parse().with_context(|| ctx("integer"))?),
                "k" => cfg.k = Some(value.parse().with_context(|| ctx("integer"))?),
                "m" => cfg.m = Some(value.parse().with_context(|| ctx("integer"))?),
                "trials" => cfg.trials = Some(value.parse().with_context(|| ctx("integer"))?),
                "seed" => cfg.seed = Some(value.parse().with_context(|| ctx("integer"))?),
                "sigma2_theta" => {
                    cfg.sigma2_theta = Some(value.parse().with_context(|| ctx("number"))?)
                }
                "sigma2_phi" => {
                    cfg.sigma2_phi = Some(value.parse().with_context(|| ctx("number"))?)
                }
                "sigma2z_grid" => {
                    cfg.sigma2z_grid = Some(parse_list(value).with_context(|| ctx("list"))?)
                }
                "delta_grid" => {
                    cfg.delta_grid = Some(parse_list(value).with_context(|| ctx("list"))?)
                }
                "rho" => cfg.rho = Some(parse_list(value).with_context(|| ctx("list"))?),
                "delta_k" => cfg.delta_k = Some(parse_list(value).with_context(|| ctx("list"))?),
                "tolerance" => cfg.tolerance = Some(value.parse().with_context(|| ctx("number"))?),
                // Emitted by manifests; carries no configuration.
                "version" => {}
                _ => bail!("line {}: unknown config key {key:?}", lineno + 1),
            }
        }
        Ok(cfg)
    }
}

/// Parse a comma-separated list of numbers.
pub fn parse_list(value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .with_context(|| format!("cannot parse {tok:?} as a number"))
        })
        .collect()
}

/// Three-way precedence: explicit flag, then config file, then default.
pub fn resolve<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Like [`resolve`] but the default is computed only if needed (for values
/// derived from other resolved values, e.g. `sigma2_phi = 1/m`).
pub fn resolve_with<T, F: FnOnce() -> T>(flag: Option<T>, file: Option<T>, default: F) -> T {
    flag.or(file).unwrap_or_else(default)
}
