//! Noise configuration file.
//!
//! A TOML file of plain key-value pairs; every key is optional:
//!
//! ```toml
//! mode = "custom"                                # none | T2 | T2star | custom
//! dephasing_times = [0.9, 1.2, 1.1, 1.2, 1.1]   # seconds, (M, C1, C2, C3, C4)
//! total_circuit_time = 0.1                       # seconds
//! slicing = 16
//! ```
//!
//! `dephasing_times` only takes effect in `custom` mode; the named modes
//! carry their own tables. Command-line flags override the file.

use std::path::Path;

use anyhow::{bail, Context, Result};
use magicdist::noise::{NoiseConfig, NoiseMode};
use serde::Deserialize;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub mode: Option<String>,
    pub dephasing_times: Option<[f64; 5]>,
    pub total_circuit_time: Option<f64>,
    pub slicing: Option<usize>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow::anyhow!("invalid config: {}", e.message()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }
}

/// Flag values that override the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoiseOverrides {
    pub mode: Option<NoiseMode>,
    pub total_circuit_time: Option<f64>,
    pub slicing: Option<usize>,
}

pub fn resolve_noise(file: Option<&ConfigFile>, flags: NoiseOverrides) -> Result<NoiseConfig> {
    let file_mode = match file.and_then(|f| f.mode.as_deref()) {
        Some(s) => Some(s.parse::<NoiseMode>()?),
        None => None,
    };
    let mode = flags.mode.or(file_mode).unwrap_or(NoiseMode::None);
    let mut cfg = NoiseConfig::preset(mode);
    if mode == NoiseMode::Custom {
        if let Some(times) = file.and_then(|f| f.dephasing_times) {
            cfg.dephasing_times = times;
        }
    }
    if let Some(t) = flags.total_circuit_time.or(file.and_then(|f| f.total_circuit_time)) {
        cfg.total_circuit_time = t;
    }
    if let Some(s) = flags.slicing.or(file.and_then(|f| f.slicing)) {
        cfg.slicing = s;
    }
    if let Err(e) = cfg.validate() {
        bail!("invalid noise configuration: {e}");
    }
    Ok(cfg)
}
