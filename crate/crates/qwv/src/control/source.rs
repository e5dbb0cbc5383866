//! Common interface for every field variant.
//!
//! The propagator asks the source once per step; analytic sources use the
//! step midpoint `t + dt/2` (second-order accurate), the closed-loop law is
//! evaluated from the state at the step start and held for one `dt`.

use crate::error::{QwvError, Result};
use crate::wavefunction::WaveFunction;

pub trait FieldSource {
    /// Field value applied over the step starting at `t`; `psi` is the
    /// state at `t`.
    fn value(&mut self, t: f64, dt: f64, psi: &WaveFunction) -> f64;

    /// Registry name of this source kind.
    fn kind(&self) -> &'static str;
}

/// Field-free propagation.
pub struct NoField;

impl FieldSource for NoField {
    fn value(&mut self, _t: f64, _dt: f64, _psi: &WaveFunction) -> f64 {
        0.0
    }

    fn kind(&self) -> &'static str {
        "none"
    }
}

/// Open-loop replay of a per-step field log recorded by an earlier run.
pub struct ReplayField {
    values: Vec<f64>,
    dt: f64,
}

impl ReplayField {
    pub fn new(values: Vec<f64>, dt: f64) -> Result<Self> {
        if dt <= 0.0 {
            return Err(QwvError::Config("replay field requires dt > 0".into()));
        }
        Ok(Self { values, dt })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl FieldSource for ReplayField {
    fn value(&mut self, t: f64, _dt: f64, _psi: &WaveFunction) -> f64 {
        let idx = (t / self.dt).round() as usize;
        self.values.get(idx).copied().unwrap_or(0.0)
    }

    fn kind(&self) -> &'static str {
        "replay"
    }
}
