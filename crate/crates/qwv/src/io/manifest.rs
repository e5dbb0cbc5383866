//! Run manifest: the fully-resolved config echoed back together with every
//! derived quantity (pulse areas, tunneling times, dipoles) and the final
//! results, as a TOML file. A scenario is reproducible from its manifest.

use crate::error::{QwvError, Result};
use crate::io::config::ScenarioConfig;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// "ok" or "failed: <stage>".
    pub status: String,
    pub scenario: String,
    /// Fully-resolved configuration (defaults and overrides applied).
    pub config: ScenarioConfig,
    /// Derived quantities resolved before propagation (tunneling times,
    /// carrier, dipole elements, pulse amplitudes, seed overlap, …).
    #[serde(default)]
    pub derived: toml::Table,
    /// Final observables (populations, ionization, …).
    #[serde(default)]
    pub results: toml::Table,
    /// Non-fatal diagnostics (e.g. a large initial target overlap).
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(config: ScenarioConfig) -> Self {
        Self {
            status: "ok".into(),
            scenario: config.scenario.clone(),
            config,
            derived: toml::Table::new(),
            results: toml::Table::new(),
            warnings: Vec::new(),
        }
    }

    pub fn set_derived(&mut self, key: &str, value: f64) {
        self.derived.insert(key.to_string(), toml::Value::Float(value));
    }

    pub fn set_result(&mut self, key: &str, value: f64) {
        self.results.insert(key.to_string(), toml::Value::Float(value));
    }

    pub fn mark_failed(&mut self, stage: &str) {
        self.status = format!("failed: {stage}");
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = toml::to_string_pretty(self)
            .map_err(|e| QwvError::Config(format!("manifest serialization: {e}")))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| {
            QwvError::Config(format!("{}: manifest parse error: {e}", path.display()))
        })
    }
}
