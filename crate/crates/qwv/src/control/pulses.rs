//! Analytic sin²-envelope pulses and linear pulse sequences.

use super::source::FieldSource;
use crate::error::{QwvError, Result};
use crate::wavefunction::WaveFunction;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One sin²-envelope pulse:
/// `A·sin²(π(t-t₀)/τ)·cos(ω(t-t₀)+φ)` on `[t₀, t₀+τ]`, identically zero
/// outside.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    /// Peak field amplitude (a.u.).
    pub amplitude: f64,
    /// Carrier angular frequency (a.u.).
    pub omega: f64,
    /// Duration τ (a.u. time).
    pub duration: f64,
    /// Start time t₀ (a.u.).
    pub start: f64,
    /// Carrier phase (rad).
    #[serde(default)]
    pub phase: f64,
}

impl PulseSpec {
    pub fn value(&self, t: f64) -> f64 {
        let s = t - self.start;
        if s < 0.0 || s > self.duration {
            return 0.0;
        }
        let env = (PI * s / self.duration).sin().powi(2);
        self.amplitude * env * (self.omega * s + self.phase).cos()
    }

    pub fn end(&self) -> f64 {
        self.start + self.duration
    }
}

/// Ordered pulse list; overlapping pulses add linearly.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PulseSequence {
    pub pulses: Vec<PulseSpec>,
}

impl PulseSequence {
    pub fn new(pulses: Vec<PulseSpec>) -> Self {
        Self { pulses }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.pulses.iter().map(|p| p.value(t)).sum()
    }

    /// End of the last pulse (0 for an empty sequence).
    pub fn span_end(&self) -> f64 {
        self.pulses.iter().map(|p| p.end()).fold(0.0, f64::max)
    }
}

impl FieldSource for PulseSequence {
    fn value(&mut self, t: f64, dt: f64, _psi: &WaveFunction) -> f64 {
        PulseSequence::value(self, t + 0.5 * dt)
    }

    fn kind(&self) -> &'static str {
        "pulses"
    }
}

/// Amplitude satisfying the sin²-envelope π-area condition
/// `|μ_if| · A·τ/2 = π` for a resonant two-level inversion.
pub fn pi_pulse_amplitude(dipole_element: f64, duration: f64) -> Result<f64> {
    if dipole_element == 0.0 {
        return Err(QwvError::ForbiddenTransition);
    }
    if duration <= 0.0 {
        return Err(QwvError::Structural(format!(
            "pulse duration must be positive (got {duration})"
        )));
    }
    Ok(2.0 * PI / (dipole_element.abs() * duration))
}
