//! Operational surface: TOML run configs with dotted-key overrides, the
//! QWV1 binary snapshot format, columnar text traces, and run manifests.

pub mod config;
pub mod manifest;
pub mod snapshot;
pub mod trace;

pub use config::{
    load_config, parse_override, FieldConfig, GeometryConfig, InitialConfig, OutputConfig,
    PropagationSection, ScenarioConfig, SweepConfig,
};
pub use manifest::RunManifest;
pub use snapshot::{read_snapshot, write_snapshot};
pub use trace::{read_field_log, write_field_log, write_trace};
