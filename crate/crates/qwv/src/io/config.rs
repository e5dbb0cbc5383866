//! Run configuration: a TOML file with a stable key schema plus
//! `--set key=value` dotted-path overrides. Unknown keys are rejected with
//! the offending key named (serde `deny_unknown_fields` everywhere).

use crate::error::{QwvError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A full scenario description; a run is reproducible from this alone.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Free-form scenario id echoed into artifacts.
    pub scenario: String,
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub field: FieldConfig,
    pub propagation: PropagationSection,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// 1 = fixed nuclei (z only), 2 = electron z × internuclear R.
    #[serde(default = "one")]
    pub dim: usize,
    #[serde(default = "d1024")]
    pub z_points: usize,
    #[serde(default = "z_lo")]
    pub z_min: f64,
    #[serde(default = "z_hi")]
    pub z_max: f64,
    /// Internuclear distance (1D) / reference R₀ for the electronic factor (2D).
    pub r: f64,
    #[serde(default = "d1024")]
    pub r_points: usize,
    #[serde(default = "r_lo")]
    pub r_min: f64,
    #[serde(default = "r_hi")]
    pub r_max: f64,
    /// Static tilt folded into the potential (localizes the eigenstates).
    #[serde(default)]
    pub e_dc: f64,
    /// Keep the DC tilt in the propagation potential (true, default) or use
    /// it only to construct the localized eigenstates (false).
    #[serde(default = "yes")]
    pub e_dc_in_propagation: bool,
    #[serde(default = "one_f")]
    pub softening: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialConfig {
    /// "ground" or "excited" localized level.
    pub level: String,
    /// "left" or "right" well.
    pub side: String,
    /// Electronic momentum boost (a.u.).
    pub k_e: f64,
    /// Target-population seed fraction ε mixed into the initial state.
    pub seed: f64,
    /// 2D only: nuclear Gaussian width σ (bohr); default 0.31.
    pub sigma: f64,
    /// 2D only: "adiabatic" (default) evaluates the electronic factor at each
    /// R slice, so the product state sits on a single Born–Oppenheimer channel;
    /// "frozen" uses the R₀ eigenstate for every slice. The adiabatic factor
    /// costs only the small parametric nuclear kinetic term ⟨p_z²⟩/4M.
    pub electronic_factor: String,
    /// 2D only: nuclear momentum boost (a.u.).
    pub k_n: f64,
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self {
            level: "ground".into(),
            side: "left".into(),
            k_e: 0.0,
            seed: 0.0,
            sigma: 0.31,
            k_n: 0.0,
            electronic_factor: "adiabatic".into(),
        }
    }
}

/// Field-source selection by registry name. Only the keys of the selected
/// kind are consulted; the rest stay at their defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldConfig {
    /// One of "none", "pulses", "four-state", "lct", "replay".
    pub kind: String,
    /// lct: coupling strength λ.
    pub lambda: f64,
    /// lct: hard cap on |E(t)|.
    pub e_max: f64,
    /// pulses: explicit sin² pulse list.
    pub pulses: Vec<crate::control::PulseSpec>,
    /// four-state: pump/dump durations (fs) and optional fixed amplitude.
    pub pump_duration_fs: f64,
    pub dump_duration_fs: f64,
    pub amplitude: Option<f64>,
    /// replay: per-step field log recorded by an earlier run.
    pub field_file: Option<String>,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            kind: "none".into(),
            lambda: 0.2,
            e_max: 0.1,
            pulses: Vec::new(),
            pump_duration_fs: 20.0,
            dump_duration_fs: 10.0,
            amplitude: None,
            field_file: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSection {
    pub dt: f64,
    /// Total time (a.u.). For the four-state kind, 0 means "schedule span
    /// plus one dump duration of settling".
    pub t_final: f64,
    #[serde(default = "abs_w")]
    pub absorber_width: f64,
    #[serde(default = "abs_s")]
    pub absorber_strength: f64,
    #[serde(default = "d20")]
    pub record_stride: usize,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default = "proton")]
    pub nuclear_mass: f64,
}

impl PropagationSection {
    pub fn to_config(&self) -> crate::propagator::PropagationConfig {
        crate::propagator::PropagationConfig {
            dt: self.dt,
            t_final: self.t_final,
            absorber_width: self.absorber_width,
            absorber_strength: self.absorber_strength,
            record_stride: self.record_stride,
            nuclear_mass: self.nuclear_mass,
            snapshot_times: self.snapshot_times.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Artifact directory; created if missing. Empty string = no artifacts
    /// written (library/test use).
    pub dir: String,
    pub trace: String,
    pub field: String,
    pub manifest: String,
    pub snapshot_prefix: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: String::new(),
            trace: "trace.dat".into(),
            field: "field.dat".into(),
            manifest: "manifest.toml".into(),
            snapshot_prefix: "snap".into(),
        }
    }
}

/// One sweep axis: rerun the scenario for each value of `axis`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// "k_n" or "sigma".
    pub axis: String,
    pub values: Vec<f64>,
}

fn one() -> usize {
    1
}
fn yes() -> bool {
    true
}
fn one_f() -> f64 {
    1.0
}
fn d1024() -> usize {
    1024
}
fn d20() -> usize {
    20
}
fn z_lo() -> f64 {
    -80.0
}
fn z_hi() -> f64 {
    80.0
}
fn r_lo() -> f64 {
    0.1
}
fn r_hi() -> f64 {
    150.0
}
// tuned so an outgoing k = 1 packet leaves < 1e-4 reflected+transmitted
fn abs_w() -> f64 {
    20.0
}
fn abs_s() -> f64 {
    0.3
}
fn proton() -> f64 {
    crate::units::PROTON_MASS
}

/// Split a `key=value` override into a dotted path and a TOML value.
pub fn parse_override(s: &str) -> Result<(Vec<String>, toml::Value)> {
    let (key, raw) = s
        .split_once('=')
        .ok_or_else(|| QwvError::Config(format!("override '{s}' is not of the form key=value")))?;
    if key.is_empty() {
        return Err(QwvError::Config(format!("override '{s}' has an empty key")));
    }
    // parse the value with TOML semantics; fall back to a bare string
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    Ok((key.split('.').map(str::to_string).collect(), value))
}

fn apply_override(root: &mut toml::Value, path: &[String], value: toml::Value) -> Result<()> {
    let mut node = root;
    for (i, key) in path.iter().enumerate() {
        let table = node.as_table_mut().ok_or_else(|| {
            QwvError::Config(format!("override path '{}' crosses a non-table", path.join(".")))
        })?;
        if i + 1 == path.len() {
            table.insert(key.clone(), value);
            return Ok(());
        }
        node = table
            .entry(key.clone())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    }
    unreachable!("override path is never empty")
}

/// Load a config file and apply `--set` overrides before deserializing, so
/// overrides are validated against the same schema as the file itself.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text, overrides).map_err(|e| match e {
        QwvError::Config(msg) => QwvError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_config(text: &str, overrides: &[String]) -> Result<ScenarioConfig> {
    let mut value: toml::Value = text
        .parse()
        .map_err(|e| QwvError::Config(format!("TOML parse error: {e}")))?;
    for s in overrides {
        let (path, v) = parse_override(s)?;
        apply_override(&mut value, &path, v)?;
    }
    ScenarioConfig::deserialize(value).map_err(|e| QwvError::Config(e.to_string()))
}
