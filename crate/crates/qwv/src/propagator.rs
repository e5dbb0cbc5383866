//! Split-operator time evolution with time-dependent field coupling and
//! complex absorbing boundaries.
//!
//! One step is the Strang factorization
//! `exp(-i V_eff dt/2) · exp(-i T dt) · exp(-i V_eff dt/2)` with
//! `V_eff = V + z·E - i·W_abs`, the kinetic factor applied spectrally.
//! The field is held constant across a step (analytic sources sample the
//! midpoint, the closed-loop law samples the step start).

use crate::analysis;
use crate::control::FieldSource;
use crate::error::{QwvError, Result};
use crate::fft::FftEngine;
use crate::grid::{Grid, Grid1D, Grid2D};
use crate::wavefunction::WaveFunction;
use num_complex::Complex64;

/// Complex-absorber mask: zero in the interior, rising smoothly
/// (sin²-ramp) over the last `width` bohr at each z-edge.
pub fn absorber_mask_1d(grid: &Grid1D, width: f64, strength: f64) -> Result<Vec<f64>> {
    if width <= 0.0 {
        return Err(QwvError::Structural(format!(
            "absorber width must be positive (got {width})"
        )));
    }
    let extent = grid.x_max() - grid.x_min();
    if width > 0.5 * extent {
        return Err(QwvError::Structural(format!(
            "absorber width {width} exceeds half the grid extent {extent}"
        )));
    }
    Ok(grid.sample(|x| edge_ramp(x, grid.x_min(), grid.x_max(), width, strength, true)))
}

/// 2D absorber: z-edges plus the large-R edge (the 1/R wall guards R → 0).
pub fn absorber_mask_2d(
    grid: &Grid2D,
    width: f64,
    strength: f64,
) -> Result<Vec<f64>> {
    let wz = absorber_mask_1d(&grid.z, width, strength)?;
    if width > 0.5 * (grid.r.x_max() - grid.r.x_min()) {
        return Err(QwvError::Structural(format!(
            "absorber width {width} exceeds half the R-grid extent"
        )));
    }
    let wr: Vec<f64> = grid
        .r
        .sample(|r| edge_ramp(r, grid.r.x_min(), grid.r.x_max(), width, strength, false));
    let (nr, nz) = (grid.r.n(), grid.z.n());
    let mut mask = vec![0.0; nr * nz];
    for ir in 0..nr {
        for iz in 0..nz {
            mask[ir * nz + iz] = wz[iz] + wr[ir];
        }
    }
    Ok(mask)
}

fn edge_ramp(x: f64, lo: f64, hi: f64, width: f64, strength: f64, both_edges: bool) -> f64 {
    let from_hi = hi - x;
    let from_lo = x - lo;
    let s = if from_hi < width {
        1.0 - from_hi / width
    } else if both_edges && from_lo < width {
        1.0 - from_lo / width
    } else {
        return 0.0;
    };
    strength * (0.5 * std::f64::consts::PI * s).sin().powi(2)
}

/// Settings for one propagation run (all times in a.u.).
#[derive(Debug, Clone)]
pub struct PropagationConfig {
    pub dt: f64,
    pub t_final: f64,
    pub absorber_width: f64,
    pub absorber_strength: f64,
    pub record_stride: usize,
    pub nuclear_mass: f64,
    /// Times at which |ψ|² snapshots are captured (nearest step).
    pub snapshot_times: Vec<f64>,
}

impl PropagationConfig {
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= 0.1) {
            return Err(QwvError::Config(format!(
                "dt = {} outside (0, 0.1] a.u.",
                self.dt
            )));
        }
        if self.t_final < 0.0 {
            return Err(QwvError::Config("t_final must be non-negative".into()));
        }
        if self.record_stride == 0 {
            return Err(QwvError::Config("record stride must be >= 1".into()));
        }
        if self.absorber_width > 0.0 {
            let check = |g: &Grid1D| -> Result<()> {
                let extent = g.x_max() - g.x_min();
                if self.absorber_width >= 0.25 * extent {
                    return Err(QwvError::Config(format!(
                        "absorber width {} must stay below 25% of the grid extent {}",
                        self.absorber_width, extent
                    )));
                }
                Ok(())
            };
            match grid {
                Grid::One(g) => check(g)?,
                Grid::Two(g) => {
                    check(&g.z)?;
                    check(&g.r)?;
                }
            }
        }
        Ok(())
    }
}

/// One recorded observable row.
#[derive(Debug, Clone, Copy)]
pub struct TraceRecord {
    pub t: f64,
    pub field: f64,
    pub p_left: f64,
    pub p_right: f64,
    pub p_total: f64,
    pub p_target: f64,
    pub mean_z: f64,
    pub mean_r: Option<f64>,
}

/// Per-run observable time series.
#[derive(Debug, Clone, Default)]
pub struct ObservableTrace {
    pub records: Vec<TraceRecord>,
}

impl ObservableTrace {
    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }
}

/// Everything a propagation produces.
pub struct PropagationOutput {
    pub psi_final: WaveFunction,
    pub trace: ObservableTrace,
    pub snapshots: Vec<(f64, WaveFunction)>,
    /// Field value applied at every step (for open-loop replay).
    pub field_log: Vec<f64>,
}

/// A failed run still reports the partial trace up to the last good step.
pub struct PropagationFailure {
    pub error: QwvError,
    pub partial_trace: ObservableTrace,
}

impl From<QwvError> for PropagationFailure {
    fn from(error: QwvError) -> Self {
        Self { error, partial_trace: ObservableTrace::default() }
    }
}

/// 1D split-operator stepper with precomputed static phases.
pub struct Propagator1D {
    grid: Grid1D,
    half_static: Vec<Complex64>,
    kin_phase: Vec<Complex64>,
    dt: f64,
    eng: FftEngine,
}

impl Propagator1D {
    pub fn new(grid: &Grid1D, v_static: &[f64], absorber: &[f64], dt: f64) -> Result<Self> {
        if v_static.len() != grid.n() || absorber.len() != grid.n() {
            return Err(QwvError::GridMismatch(
                "potential/absorber length does not match grid".into(),
            ));
        }
        let half_static = v_static
            .iter()
            .zip(absorber)
            .map(|(&v, &w)| Complex64::from_polar((-w * dt / 2.0).exp(), -v * dt / 2.0))
            .collect();
        let n = grid.n() as f64;
        let kin_phase = grid
            .ks()
            .iter()
            .map(|&k| Complex64::from_polar(1.0 / n, -0.5 * k * k * dt))
            .collect();
        Ok(Self { grid: grid.clone(), half_static, kin_phase, dt, eng: FftEngine::new() })
    }

    /// Advance ψ by one Strang step under field value `e_field`.
    pub fn step(&mut self, amps: &mut [Complex64], e_field: f64) {
        apply_half(amps, &self.half_static, self.grid.xs(), e_field, self.dt);
        self.eng.raw_forward(amps, self.grid.n());
        for (a, p) in amps.iter_mut().zip(&self.kin_phase) {
            *a *= p;
        }
        self.eng.raw_inverse(amps, self.grid.n());
        apply_half(amps, &self.half_static, self.grid.xs(), e_field, self.dt);
    }
}

fn apply_half(
    amps: &mut [Complex64],
    half_static: &[Complex64],
    zs: &[f64],
    e_field: f64,
    dt: f64,
) {
    if e_field == 0.0 {
        for (a, h) in amps.iter_mut().zip(half_static) {
            *a *= h;
        }
    } else {
        for ((a, h), &z) in amps.iter_mut().zip(half_static).zip(zs) {
            *a *= h * Complex64::from_polar(1.0, -z * e_field * dt / 2.0);
        }
    }
}

/// 2D split-operator stepper (electron z with mass 1, internuclear R with
/// the 1/M kinetic coefficient taken verbatim from the Hamiltonian).
pub struct Propagator2D {
    grid: Grid2D,
    half_static: Vec<Complex64>,
    kin_phase: Vec<Complex64>,
    field_row: Vec<Complex64>,
    dt: f64,
    eng: FftEngine,
}

impl Propagator2D {
    pub fn new(
        grid: &Grid2D,
        v_static: &[f64],
        absorber: &[f64],
        dt: f64,
        nuclear_mass: f64,
    ) -> Result<Self> {
        let total = grid.len();
        if v_static.len() != total || absorber.len() != total {
            return Err(QwvError::GridMismatch(
                "potential/absorber length does not match 2D grid".into(),
            ));
        }
        if nuclear_mass <= 0.0 {
            return Err(QwvError::Config("nuclear mass must be positive".into()));
        }
        let half_static = v_static
            .iter()
            .zip(absorber)
            .map(|(&v, &w)| Complex64::from_polar((-w * dt / 2.0).exp(), -v * dt / 2.0))
            .collect();
        let (nr, nz) = (grid.r.n(), grid.z.n());
        let scale = 1.0 / (nr * nz) as f64;
        let mut kin_phase = vec![Complex64::ZERO; total];
        for (ir, &kr) in grid.r.ks().iter().enumerate() {
            for (iz, &kz) in grid.z.ks().iter().enumerate() {
                let t = 0.5 * kz * kz + kr * kr / nuclear_mass;
                kin_phase[ir * nz + iz] = Complex64::from_polar(scale, -t * dt);
            }
        }
        Ok(Self {
            grid: grid.clone(),
            half_static,
            kin_phase,
            field_row: vec![Complex64::ZERO; nz],
            dt,
            eng: FftEngine::new(),
        })
    }

    pub fn step(&mut self, amps: &mut [Complex64], e_field: f64) {
        let (nr, nz) = (self.grid.r.n(), self.grid.z.n());
        self.apply_half_2d(amps, e_field);
        self.eng.raw_forward_2d(amps, nr, nz);
        for (a, p) in amps.iter_mut().zip(&self.kin_phase) {
            *a *= p;
        }
        self.eng.raw_inverse_2d(amps, nr, nz);
        self.apply_half_2d(amps, e_field);
    }

    fn apply_half_2d(&mut self, amps: &mut [Complex64], e_field: f64) {
        let nz = self.grid.z.n();
        if e_field == 0.0 {
            for (a, h) in amps.iter_mut().zip(&self.half_static) {
                *a *= h;
            }
        } else {
            for (f, &z) in self.field_row.iter_mut().zip(self.grid.z.xs()) {
                *f = Complex64::from_polar(1.0, -z * e_field * self.dt / 2.0);
            }
            for (row, hrow) in amps
                .chunks_exact_mut(nz)
                .zip(self.half_static.chunks_exact(nz))
            {
                for ((a, h), f) in row.iter_mut().zip(hrow).zip(&self.field_row) {
                    *a *= h * f;
                }
            }
        }
    }
}

enum Stepper {
    One(Propagator1D),
    Two(Propagator2D),
}

/// Run a full propagation, recording observables every `record_stride`
/// steps. Deterministic given its inputs.
pub fn propagate(
    psi0: &WaveFunction,
    config: &PropagationConfig,
    v_static: &[f64],
    field: &mut dyn FieldSource,
    target: Option<&WaveFunction>,
) -> std::result::Result<PropagationOutput, PropagationFailure> {
    config.validate(psi0.grid())?;
    let grid = psi0.grid().clone();
    let mut stepper = match &grid {
        Grid::One(g) => {
            let absorber = if config.absorber_width > 0.0 {
                absorber_mask_1d(g, config.absorber_width, config.absorber_strength)?
            } else {
                vec![0.0; g.n()]
            };
            Stepper::One(Propagator1D::new(g, v_static, &absorber, config.dt)?)
        }
        Grid::Two(g) => {
            let absorber = if config.absorber_width > 0.0 {
                absorber_mask_2d(g, config.absorber_width, config.absorber_strength)?
            } else {
                vec![0.0; g.len()]
            };
            Stepper::Two(Propagator2D::new(
                g,
                v_static,
                &absorber,
                config.dt,
                config.nuclear_mass,
            )?)
        }
    };

    let n_steps = (config.t_final / config.dt).round() as usize;
    let mut psi = psi0.clone();
    let mut trace = ObservableTrace::default();
    let mut snapshots = Vec::new();
    let mut field_log = Vec::with_capacity(n_steps);
    let mut snap_iter = config.snapshot_times.clone();
    snap_iter.sort_by(f64::total_cmp);
    let mut next_snap = 0;

    let record = |trace: &mut ObservableTrace, t: f64, e: f64, psi: &WaveFunction| -> Result<()> {
        trace.records.push(observe(t, e, psi, target)?);
        Ok(())
    };

    let mut last_field = field.value(0.0, config.dt, &psi);
    record(&mut trace, 0.0, last_field, &psi)?;
    while next_snap < snap_iter.len() && snap_iter[next_snap] <= 0.0 {
        snapshots.push((0.0, psi.clone()));
        next_snap += 1;
    }

    for step in 0..n_steps {
        let t = step as f64 * config.dt;
        let e = if step == 0 { last_field } else { field.value(t, config.dt, &psi) };
        last_field = e;
        field_log.push(e);
        match &mut stepper {
            Stepper::One(p) => p.step(psi.amps_mut(), e),
            Stepper::Two(p) => p.step(psi.amps_mut(), e),
        }
        let t_next = (step + 1) as f64 * config.dt;

        let probe = psi.amps()[0] + psi.amps()[psi.amps().len() / 2];
        if !probe.re.is_finite() || !probe.im.is_finite() {
            return Err(PropagationFailure {
                error: QwvError::NumericBlowup {
                    t: t_next,
                    last_good: t,
                    detail: "non-finite amplitude after split step".into(),
                },
                partial_trace: trace,
            });
        }

        if (step + 1) % config.record_stride == 0 || step + 1 == n_steps {
            record(&mut trace, t_next, e, &psi)?;
        }
        while next_snap < snap_iter.len()
            && snap_iter[next_snap] <= t_next + 0.5 * config.dt
        {
            snapshots.push((t_next, psi.clone()));
            next_snap += 1;
        }
    }

    Ok(PropagationOutput { psi_final: psi, trace, snapshots, field_log })
}

fn observe(
    t: f64,
    field: f64,
    psi: &WaveFunction,
    target: Option<&WaveFunction>,
) -> Result<TraceRecord> {
    let (p_left, p_right) = analysis::domain_populations(psi)?;
    let p_total = psi.norm_sqr();
    let p_target = match target {
        Some(tgt) => analysis::target_projection(psi, tgt)?,
        None => 0.0,
    };
    let (mean_z, mean_r) = match psi.grid() {
        Grid::One(g) => (weighted_mean_z(psi, g.xs(), 1), None),
        Grid::Two(g) => {
            let mz = mean_z_2d(psi, g);
            let mr = mean_r_2d(psi, g);
            (mz, Some(mr))
        }
    };
    Ok(TraceRecord { t, field, p_left, p_right, p_total, p_target, mean_z, mean_r })
}

fn weighted_mean_z(psi: &WaveFunction, zs: &[f64], _dim: usize) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (a, &z) in psi.amps().iter().zip(zs) {
        let d = a.norm_sqr();
        num += d * z;
        den += d;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn mean_z_2d(psi: &WaveFunction, g: &Grid2D) -> f64 {
    let nz = g.z.n();
    let mut num = 0.0;
    let mut den = 0.0;
    for row in psi.amps().chunks_exact(nz) {
        for (a, &z) in row.iter().zip(g.z.xs()) {
            let d = a.norm_sqr();
            num += d * z;
            den += d;
        }
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

fn mean_r_2d(psi: &WaveFunction, g: &Grid2D) -> f64 {
    let nz = g.z.n();
    let mut num = 0.0;
    let mut den = 0.0;
    for (row, &r) in psi.amps().chunks_exact(nz).zip(g.r.xs()) {
        let d: f64 = row.iter().map(|a| a.norm_sqr()).sum();
        num += d * r;
        den += d;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// ⟨H⟩ for the field-free Hamiltonian (spectral kinetic + diagonal V),
/// norm-divided. `nuclear_mass` is only used for 2D states.
pub fn mean_energy(
    psi: &WaveFunction,
    v_static: &[f64],
    nuclear_mass: f64,
    eng: &mut FftEngine,
) -> Result<f64> {
    let v_exp = psi.expectation(v_static)?;
    let mut amps = psi.amps().to_vec();
    let t_exp = match psi.grid() {
        Grid::One(g) => {
            eng.raw_forward(&mut amps, g.n());
            let mut num = 0.0;
            let mut den = 0.0;
            for (a, &k) in amps.iter().zip(g.ks()) {
                let d = a.norm_sqr();
                num += d * 0.5 * k * k;
                den += d;
            }
            num / den
        }
        Grid::Two(g) => {
            let (nr, nz) = (g.r.n(), g.z.n());
            eng.raw_forward_2d(&mut amps, nr, nz);
            let mut num = 0.0;
            let mut den = 0.0;
            for (ir, &kr) in g.r.ks().iter().enumerate() {
                for (iz, &kz) in g.z.ks().iter().enumerate() {
                    let d = amps[ir * nz + iz].norm_sqr();
                    num += d * (0.5 * kz * kz + kr * kr / nuclear_mass);
                    den += d;
                }
            }
            num / den
        }
    };
    Ok(t_exp + v_exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::NoField;
    use crate::grid::Grid1D;

    #[test]
    fn absorber_zero_in_interior() {
        let g = Grid1D::new(256, -80.0, 80.0).unwrap();
        let w = absorber_mask_1d(&g, 10.0, 0.05).unwrap();
        for (j, &x) in g.xs().iter().enumerate() {
            if x > -70.0 + 1e-9 && x < 70.0 - 1e-9 {
                assert_eq!(w[j], 0.0, "nonzero absorber at x = {x}");
            } else {
                assert!(w[j] >= 0.0);
            }
        }
        assert!(absorber_mask_1d(&g, 90.0, 0.05).is_err());
    }

    #[test]
    fn stationary_state_phase_advance() {
        use crate::eigensolver::fgh_solve;
        let g = Grid1D::new(256, -12.0, 12.0).unwrap();
        let v = g.sample(|x| 0.5 * x * x);
        let pairs = fgh_solve(&g, &v, 1).unwrap();
        let psi0 = pairs[0].state.clone();
        let energy = pairs[0].energy;

        let dt = 0.001;
        let steps = 2000;
        let mut p = Propagator1D::new(&g, &v, &vec![0.0; g.n()], dt).unwrap();
        let mut psi = psi0.clone();
        for _ in 0..steps {
            p.step(psi.amps_mut(), 0.0);
        }
        // density unchanged, phase advanced by e^{-iEt} (up to the O(dt²)
        // Strang phase drift)
        let t = dt * steps as f64;
        let overlap = psi0.inner(&psi).unwrap();
        let expected = Complex64::from_polar(1.0, -energy * t);
        assert!(
            (overlap - expected).norm() < 5e-7,
            "phase error {}",
            (overlap - expected).norm()
        );
    }

    #[test]
    fn free_gaussian_spreads_analytically() {
        let g = Grid1D::new(1024, -80.0, 80.0).unwrap();
        let sigma0 = 2.0;
        let psi0 = WaveFunction::gaussian_1d(&g, 0.0, sigma0, 0.0);
        let v = vec![0.0; g.n()];
        let dt = 0.05;
        let steps = 1000; // t = 50: the spread packet still clears the edges
        let mut p = Propagator1D::new(&g, &v, &vec![0.0; g.n()], dt).unwrap();
        let mut psi = psi0;
        for _ in 0..steps {
            p.step(psi.amps_mut(), 0.0);
        }
        let t = dt * steps as f64;
        let z2: Vec<f64> = g.xs().iter().map(|&x| x * x).collect();
        let var = psi.expectation(&z2).unwrap();
        let expected = sigma0 * sigma0 + t * t / (4.0 * sigma0 * sigma0);
        assert!(
            (var - expected).abs() < 1e-6,
            "σ²(t) = {var}, expected {expected}"
        );
    }

    #[test]
    fn zero_duration_returns_input() {
        let g = Grid1D::new(256, -40.0, 40.0).unwrap();
        let psi0 = WaveFunction::gaussian_1d(&g, 0.0, 2.0, 0.0);
        let v = vec![0.0; g.n()];
        let cfg = PropagationConfig {
            dt: 0.05,
            t_final: 0.0,
            absorber_width: 0.0,
            absorber_strength: 0.0,
            record_stride: 10,
            nuclear_mass: 1836.15267,
            snapshot_times: vec![],
        };
        let mut field = NoField;
        let out = propagate(&psi0, &cfg, &v, &mut field, None)
            .map_err(|f| f.error)
            .unwrap();
        assert_eq!(out.trace.records.len(), 1);
        assert_eq!(out.psi_final.amps(), psi0.amps());
    }

    #[test]
    fn norm_conserved_without_absorber() {
        let g = Grid1D::new(512, -40.0, 40.0).unwrap();
        let m = crate::potentials::PotentialModel::new(10.0).unwrap();
        let v = g.sample(|z| crate::potentials::soft_core_1d(z, &m));
        let psi0 = WaveFunction::gaussian_1d(&g, -5.0, 1.0, 0.0);
        let mut p = Propagator1D::new(&g, &v, &vec![0.0; g.n()], 0.05).unwrap();
        let mut psi = psi0;
        for _ in 0..10_000 {
            p.step(psi.amps_mut(), 0.0);
        }
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn separable_2d_stays_separable() {
        // potential V(z) + V(R), field off: evolution factorizes
        let gz = Grid1D::new(64, -20.0, 20.0).unwrap();
        let gr = Grid1D::new(64, 0.1, 40.1).unwrap();
        let g2 = Grid2D::new(gz.clone(), gr.clone()).unwrap();
        let mass = 100.0;

        let vz = gz.sample(|z| 0.5 * 0.01 * z * z);
        let vr: Vec<f64> = gr.sample(|r| 0.5 * 0.02 * (r - 20.0) * (r - 20.0));
        let mut v2 = vec![0.0; g2.len()];
        for ir in 0..gr.n() {
            for iz in 0..gz.n() {
                v2[ir * gz.n() + iz] = vz[iz] + vr[ir];
            }
        }

        let pz = WaveFunction::gaussian_1d(&gz, 2.0, 1.5, 0.0);
        let pr = WaveFunction::gaussian_1d(&gr, 20.0, 1.0, 0.0);
        let mut amps = vec![Complex64::ZERO; g2.len()];
        for ir in 0..gr.n() {
            for iz in 0..gz.n() {
                amps[ir * gz.n() + iz] = pr.amps()[ir] * pz.amps()[iz];
            }
        }
        let psi2 = WaveFunction::new(Grid::Two(g2.clone()), amps).unwrap();

        let dt = 0.02;
        let steps = 500;
        let mut p2 = Propagator2D::new(&g2, &v2, &vec![0.0; g2.len()], dt, mass).unwrap();
        let mut psi = psi2;
        for _ in 0..steps {
            p2.step(psi.amps_mut(), 0.0);
        }

        // evolve factors independently (R factor with kinetic k²/M via mass
        // rescaling: -1/M ∂² = -(1/2)(2/M) ∂², i.e. an effective mass M/2)
        let mut p1z = Propagator1D::new(&gz, &vz, &vec![0.0; gz.n()], dt).unwrap();
        let mut fz = pz;
        for _ in 0..steps {
            p1z.step(fz.amps_mut(), 0.0);
        }
        let vr_scaled: Vec<f64> = vr.iter().map(|&v| v * mass / 2.0).collect();
        let mut p1r = Propagator1D::new(&gr, &vr_scaled, &vec![0.0; gr.n()], dt * 2.0 / mass).unwrap();
        let mut fr = pr;
        for _ in 0..steps {
            p1r.step(fr.amps_mut(), 0.0);
        }

        let mut max_err: f64 = 0.0;
        for ir in 0..gr.n() {
            for iz in 0..gz.n() {
                let sep = fr.amps()[ir] * fz.amps()[iz];
                let got = psi.amps()[ir * gz.n() + iz];
                max_err = max_err.max((sep - got).norm());
            }
        }
        assert!(max_err < 1e-8, "separability error {max_err}");
    }

    #[test]
    fn strang_self_convergence_order_two() {
        let g = Grid1D::new(512, -40.0, 40.0).unwrap();
        let m = crate::potentials::PotentialModel::new(10.0).unwrap();
        let v = g.sample(|z| crate::potentials::soft_core_1d(z, &m));
        let psi0 = WaveFunction::gaussian_1d(&g, -5.0, 1.0, 0.5);
        let t_final = 10.0;

        // drive with a smooth field so the midpoint rule is exercised
        let run = |dt: f64| -> WaveFunction {
            let mut p = Propagator1D::new(&g, &v, &vec![0.0; g.n()], dt).unwrap();
            let mut psi = psi0.clone();
            let steps = (t_final / dt).round() as usize;
            for s in 0..steps {
                let tm = (s as f64 + 0.5) * dt;
                p.step(psi.amps_mut(), 0.01 * (0.3 * tm).sin());
            }
            psi
        };
        let err = |a: &WaveFunction, b: &WaveFunction| -> f64 {
            a.amps()
                .iter()
                .zip(b.amps())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let fine = run(0.003125);
        let e1 = err(&run(0.1), &fine);
        let e2 = err(&run(0.05), &fine);
        let e3 = err(&run(0.025), &fine);
        let order_a = (e1 / e2).log2();
        let order_b = (e2 / e3).log2();
        assert!(
            (1.8..=2.2).contains(&order_a) && (1.8..=2.2).contains(&order_b),
            "orders {order_a:.2}, {order_b:.2}"
        );
    }
}
