//! Closed-loop local-control law: the field at each instant is chosen from
//! the projection of the current state onto the target, so the target
//! population grows monotonically under exact propagation.

use super::source::FieldSource;
use crate::error::{QwvError, Result};
use crate::wavefunction::WaveFunction;

/// Local-control policy: coupling strength λ, target state, field cap.
///
/// With the +z·E(t) Hamiltonian coupling, the emitted field is
/// `E = clamp(λ·Im[⟨Ψ|ψ_f⟩⟨ψ_f|z|Ψ⟩], ±e_max)`,
/// the ordering for which dP_f/dt = 2λ·Im[...]² ≥ 0 with λ > 0. A positive
/// λ therefore always drives population toward the target; the physical
/// dipole sign is absorbed into λ.
#[derive(Debug, Clone)]
pub struct ControlPolicy {
    pub lambda: f64,
    pub target: WaveFunction,
    pub e_max: f64,
    /// Static offset added to the emitted field (normally the DC tilt is
    /// folded into the static potential instead; this stays 0).
    pub dc_offset: f64,
    /// z·ψ_f precomputed on the target grid.
    z_target: Vec<num_complex::Complex64>,
}

impl ControlPolicy {
    pub fn new(lambda: f64, target: WaveFunction, e_max: f64) -> Result<Self> {
        if e_max <= 0.0 {
            return Err(QwvError::Config(format!("field cap must be positive (got {e_max})")));
        }
        let zs = target.grid().as_1d()?.xs().to_vec();
        let z_target = target
            .amps()
            .iter()
            .zip(&zs)
            .map(|(a, &z)| a * z)
            .collect();
        Ok(Self { lambda, target, e_max, dc_offset: 0.0, z_target })
    }
}

/// Evaluate the local-control field for the current state (pure function).
pub fn lct_field(psi: &WaveFunction, policy: &ControlPolicy) -> Result<f64> {
    if !psi.grid().same_as(policy.target.grid()) {
        return Err(QwvError::GridMismatch(
            "LCT state and target live on different grids".into(),
        ));
    }
    let dv = psi.cell_volume();
    let mut proj = num_complex::Complex64::ZERO; // ⟨ψ_f|Ψ⟩
    let mut zmat = num_complex::Complex64::ZERO; // ⟨ψ_f|z|Ψ⟩
    for ((&a, &f), &zf) in psi
        .amps()
        .iter()
        .zip(policy.target.amps())
        .zip(&policy.z_target)
    {
        proj += f.conj() * a;
        zmat += zf.conj() * a;
    }
    proj *= dv;
    zmat *= dv;
    // Im[⟨Ψ|ψ_f⟩⟨ψ_f|z|Ψ⟩]
    let raw = policy.lambda * (proj.conj() * zmat).im;
    Ok(raw.clamp(-policy.e_max, policy.e_max) + policy.dc_offset)
}

impl FieldSource for ControlPolicy {
    fn value(&mut self, _t: f64, _dt: f64, psi: &WaveFunction) -> f64 {
        // evaluated at step start and held over one dt
        lct_field(psi, self).unwrap_or(0.0)
    }

    fn kind(&self) -> &'static str {
        "lct"
    }
}

/// A seeded initial state and the recorded overlap of its inputs.
#[derive(Debug, Clone)]
pub struct SeededState {
    pub state: WaveFunction,
    /// |⟨ψ_f|ψ_init⟩| of the inputs; above 1e-3 callers should record a
    /// warning in the run manifest.
    pub input_overlap: f64,
}

/// Mix a small target-population seed into the initial state:
/// `√(1−ε)·ψ_init + √ε·ψ_f`, renormalized.
pub fn seed_initial_state(
    psi_init: &WaveFunction,
    psi_f: &WaveFunction,
    epsilon: f64,
) -> Result<SeededState> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(QwvError::Config(format!(
            "seed fraction must be in [0, 1) (got {epsilon})"
        )));
    }
    let input_overlap = psi_f.inner(psi_init)?.norm();
    if epsilon == 0.0 {
        return Ok(SeededState { state: psi_init.clone(), input_overlap });
    }
    let a = (1.0 - epsilon).sqrt();
    let b = epsilon.sqrt();
    let mut state = psi_init.clone();
    for (s, &f) in state.amps_mut().iter_mut().zip(psi_f.amps()) {
        *s = *s * a + f * b;
    }
    state.normalize();
    Ok(SeededState { state, input_overlap })
}
