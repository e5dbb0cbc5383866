//! End-to-end scenario drivers: resolve a config into grids, potentials,
//! initial states and a field source; propagate; collect artifacts. Also
//! the nuclear-parameter sweep runner with its 2D/1D transfer ratios.

use crate::analysis;
use crate::control::{
    four_state_schedule, seed_initial_state, ControlPolicy, FieldSource, NoField, PulseSequence,
    ReplayField, ScheduleOptions,
};
use crate::eigensolver::{localized_pair, Level};
use crate::error::{QwvError, Result};
use crate::grid::{Grid, Grid1D, Grid2D};
use crate::io::config::{FieldConfig, GeometryConfig, InitialConfig, ScenarioConfig};
use crate::io::manifest::RunManifest;
use crate::io::{write_field_log, write_snapshot, write_trace};
use crate::potentials::{soft_core_1d, soft_core_2d, PotentialModel};
use crate::propagator::{propagate, ObservableTrace};
use crate::units;
use crate::wavefunction::WaveFunction;
use num_complex::Complex64;
use std::path::Path;

/// Registered field-source kinds, in registry order.
pub const FIELD_KINDS: [&str; 5] = ["none", "pulses", "four-state", "lct", "replay"];

/// Grids and static potential resolved from a geometry section. The 1D
/// `model` (internuclear distance + tilt) also parameterizes the electronic
/// factor of 2D initial states.
pub struct ResolvedGeometry {
    pub grid: Grid,
    pub z_grid: Grid1D,
    pub model: PotentialModel,
    pub v_static: Vec<f64>,
}

pub fn resolve_geometry(g: &GeometryConfig) -> Result<ResolvedGeometry> {
    let z_grid = Grid1D::new(g.z_points, g.z_min, g.z_max)?;
    let model = PotentialModel::new(g.r)?
        .with_softening(g.softening)?
        .with_dc(g.e_dc);
    // the tilt always localizes the eigenstates; it is part of the
    // propagation potential only when e_dc_in_propagation is set
    let prop_dc = if g.e_dc_in_propagation { g.e_dc } else { 0.0 };
    match g.dim {
        1 => {
            let prop_model = model.with_dc(prop_dc);
            let v_static = z_grid.sample(|z| soft_core_1d(z, &prop_model));
            Ok(ResolvedGeometry { grid: Grid::One(z_grid.clone()), z_grid, model, v_static })
        }
        2 => {
            let r_grid = Grid1D::new(g.r_points, g.r_min, g.r_max)?;
            let grid2 = Grid2D::new(z_grid.clone(), r_grid.clone())?;
            let mut v_static = vec![0.0; grid2.len()];
            for (ir, &r) in r_grid.xs().iter().enumerate() {
                for (iz, &z) in z_grid.xs().iter().enumerate() {
                    v_static[ir * z_grid.n() + iz] = soft_core_2d(z, r, g.softening)? + z * prop_dc;
                }
            }
            Ok(ResolvedGeometry { grid: Grid::Two(grid2), z_grid, model, v_static })
        }
        d => Err(QwvError::Config(format!("geometry.dim must be 1 or 2 (got {d})"))),
    }
}

fn parse_level(s: &str) -> Result<Level> {
    match s {
        "ground" => Ok(Level::Ground),
        "excited" => Ok(Level::FirstExcited),
        other => Err(QwvError::Config(format!(
            "initial.level must be 'ground' or 'excited' (got '{other}')"
        ))),
    }
}

/// The lowest-energy eigenfunction localized in the right well of the
/// (possibly tilted) potential — the transfer target ψ_R1.
pub fn target_state(z_grid: &Grid1D, model: &PotentialModel) -> Result<WaveFunction> {
    Ok(localized_pair(z_grid, model, Level::Ground)?.right.state)
}

/// Localized 1D initial state: chosen level/side, momentum-boosted by k_e,
/// optionally seeded with target population ε. Returns the state and the
/// |⟨ψ_f|ψ_init⟩| overlap of the unseeded inputs.
pub fn build_initial_state_1d(
    z_grid: &Grid1D,
    model: &PotentialModel,
    init: &InitialConfig,
    target: &WaveFunction,
) -> Result<(WaveFunction, f64)> {
    let pair = localized_pair(z_grid, model, parse_level(&init.level)?)?;
    let mut psi = match init.side.as_str() {
        "left" => pair.left.state,
        "right" => pair.right.state,
        other => {
            return Err(QwvError::Config(format!(
                "initial.side must be 'left' or 'right' (got '{other}')"
            )))
        }
    };
    if init.k_e != 0.0 {
        psi.boost(init.k_e)?;
    }
    let seeded = seed_initial_state(&psi, target, init.seed)?;
    Ok((seeded.state, seeded.input_overlap))
}

/// 2D initial state Ψ(z,R,0) = ψ_elec(z;R)·N·exp(−(R−R₀)²/4σ²)·e^{ik_nR},
/// boosted by k_e in z and normalized. R₀ is the geometry's internuclear
/// distance. By default the electronic factor is the localized eigenstate of
/// each R slice (adiabatic), so the nuclear marginal feels only the flat
/// field-free curve and moves ballistically under a k_n kick; with
/// `initial.electronic_factor = "frozen"` the R₀ eigenstate is reused for
/// every slice. Returns geometry warnings (Gaussian tail clipped beyond 1e−8).
pub fn build_initial_state_2d(
    geom: &ResolvedGeometry,
    init: &InitialConfig,
) -> Result<(WaveFunction, Vec<String>)> {
    let grid2 = match &geom.grid {
        Grid::Two(g) => g,
        Grid::One(_) => {
            return Err(QwvError::Config("2D initial state on a 1D geometry".into()))
        }
    };
    if init.sigma <= 0.0 {
        return Err(QwvError::Config(format!(
            "nuclear width must be positive (got {})",
            init.sigma
        )));
    }
    let level = parse_level(&init.level)?;
    if !matches!(init.side.as_str(), "left" | "right") {
        return Err(QwvError::Config(format!(
            "initial.side must be 'left' or 'right' (got '{}')",
            init.side
        )));
    }
    let r0 = geom.model.r;
    let nuclear = WaveFunction::gaussian_1d(&grid2.r, r0, init.sigma, init.k_n);

    let mut warnings = Vec::new();
    for edge in [grid2.r.x_min(), grid2.r.x_max()] {
        let tail = (-(edge - r0) * (edge - r0) / (4.0 * init.sigma * init.sigma)).exp();
        if tail > 1e-8 {
            warnings.push(format!(
                "nuclear Gaussian tail at R = {edge} is {tail:.2e} (> 1e-8); the grid clips it"
            ));
        }
    }

    let pick = |pair: crate::eigensolver::LocalizedPair| match init.side.as_str() {
        "left" => pair.left.state,
        _ => pair.right.state,
    };

    let nz = grid2.z.n();
    let mut amps = vec![Complex64::ZERO; grid2.len()];
    match init.electronic_factor.as_str() {
        "frozen" => {
            let elec = pick(localized_pair(&grid2.z, &geom.model, level)?);
            for (ir, &cn) in nuclear.amps().iter().enumerate() {
                for (iz, &ce) in elec.amps().iter().enumerate() {
                    amps[ir * nz + iz] = cn * ce;
                }
            }
        }
        "adiabatic" => {
            // Only slices actually populated by the nuclear Gaussian need an
            // eigensolve; far slices stay empty (their potentials may not
            // even support a localized pair).
            let peak = nuclear.amps().iter().map(|c| c.norm()).fold(0.0, f64::max);
            let cutoff = peak * 1e-12;
            let mut prev: Option<Vec<Complex64>> = None;
            for (ir, &cn) in nuclear.amps().iter().enumerate() {
                if cn.norm() < cutoff {
                    continue;
                }
                let r = grid2.r.xs()[ir];
                let model_r = PotentialModel::new(r)?
                    .with_softening(geom.model.softening)?
                    .with_dc(geom.model.e_dc);
                let pair = localized_pair(&grid2.z, &model_r, level).map_err(|e| {
                    QwvError::Structural(format!("electronic factor at R = {r:.4}: {e}"))
                })?;
                let mut elec = pick(pair).amps().to_vec();
                // the eigensolver's overall sign is arbitrary per slice; a
                // flip between neighbours would inject spurious R-momentum
                if let Some(p) = &prev {
                    let overlap: f64 =
                        p.iter().zip(&elec).map(|(a, b)| (a.conj() * b).re).sum();
                    if overlap < 0.0 {
                        for c in &mut elec {
                            *c = -*c;
                        }
                    }
                }
                for (iz, &ce) in elec.iter().enumerate() {
                    amps[ir * nz + iz] = cn * ce;
                }
                prev = Some(elec);
            }
        }
        other => {
            return Err(QwvError::Config(format!(
                "initial.electronic_factor must be 'adiabatic' or 'frozen' (got '{other}')"
            )))
        }
    }
    let mut psi = WaveFunction::new(Grid::Two(grid2.clone()), amps)?;
    if init.k_e != 0.0 {
        psi.boost(init.k_e)?;
    }
    psi.normalize();
    Ok((psi, warnings))
}

struct BuiltField {
    source: Box<dyn FieldSource>,
    derived: Vec<(&'static str, f64)>,
    /// Field-implied run length, used when `propagation.t_final` is 0.
    t_final_hint: Option<f64>,
}

/// Instantiate the field source named by `field.kind` from the registry.
fn build_field(
    field: &FieldConfig,
    geom: &ResolvedGeometry,
    target: &WaveFunction,
    dt: f64,
) -> Result<BuiltField> {
    match field.kind.as_str() {
        "none" => Ok(BuiltField { source: Box::new(NoField), derived: vec![], t_final_hint: None }),
        "pulses" => {
            let seq = PulseSequence::new(field.pulses.clone());
            let hint = seq.span_end();
            Ok(BuiltField {
                source: Box::new(seq),
                derived: vec![],
                t_final_hint: Some(hint),
            })
        }
        "four-state" => {
            let opts = ScheduleOptions {
                pump_duration: units::fs_to_au(field.pump_duration_fs),
                dump_duration: units::fs_to_au(field.dump_duration_fs),
                amplitude_override: field.amplitude,
                ground_pair_only: false,
            };
            let sched = four_state_schedule(&geom.z_grid, &geom.model, &opts)?;
            let derived = vec![
                ("tunneling_time_t1_fs", units::au_to_fs(sched.wait_time)),
                ("tunneling_time_t2_fs", units::au_to_fs(sched.delay)),
                ("carrier_omega_au", sched.carrier),
                ("dipole_element_au", sched.dipole_element),
                ("pump_amplitude_au", sched.pump_amplitude),
                ("dump_amplitude_au", sched.dump_amplitude),
            ];
            // settle for one more dump duration after the last pulse
            let hint = sched.total_span + units::fs_to_au(field.dump_duration_fs);
            Ok(BuiltField {
                source: Box::new(sched.pulses),
                derived,
                t_final_hint: Some(hint),
            })
        }
        "lct" => {
            if matches!(geom.grid, Grid::Two(_)) {
                return Err(QwvError::Config(
                    "the lct field source is 1D-only (the control law is not re-optimized for nuclear motion)".into(),
                ));
            }
            let policy = ControlPolicy::new(field.lambda, target.clone(), field.e_max)?;
            Ok(BuiltField {
                source: Box::new(policy),
                derived: vec![("lct_lambda", field.lambda), ("lct_e_max", field.e_max)],
                t_final_hint: None,
            })
        }
        "replay" => {
            let file = field.field_file.as_deref().ok_or_else(|| {
                QwvError::Config("field.kind = 'replay' requires field.field_file".into())
            })?;
            let (log_dt, values) = crate::io::read_field_log(Path::new(file))?;
            if (log_dt - dt).abs() > 1e-12 {
                return Err(QwvError::Config(format!(
                    "replay log dt = {log_dt} does not match propagation.dt = {dt}"
                )));
            }
            let hint = values.len() as f64 * dt;
            Ok(BuiltField {
                source: Box::new(ReplayField::new(values, log_dt)?),
                derived: vec![],
                t_final_hint: Some(hint),
            })
        }
        other => Err(QwvError::Config(format!(
            "unknown field kind '{other}' (registered: {})",
            FIELD_KINDS.join(", ")
        ))),
    }
}

/// Everything a scenario run produces, in memory. Files are written only
/// when `output.dir` is non-empty.
pub struct RunArtifacts {
    pub manifest: RunManifest,
    pub trace: ObservableTrace,
    pub field_log: Vec<f64>,
    pub psi_final: WaveFunction,
    pub snapshots: Vec<(f64, WaveFunction)>,
}

/// Run one scenario end to end. On failure the manifest (with its failure
/// stage) is still written when an output directory is configured.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunArtifacts> {
    let mut manifest = RunManifest::new(cfg.clone());
    match run_scenario_inner(cfg, &mut manifest) {
        Ok(artifacts) => Ok(artifacts),
        Err(e) => {
            if !cfg.output.dir.is_empty() {
                let dir = Path::new(&cfg.output.dir);
                let _ = std::fs::create_dir_all(dir);
                let _ = manifest.save(&dir.join(&cfg.output.manifest));
            }
            Err(e)
        }
    }
}

fn run_scenario_inner(cfg: &ScenarioConfig, manifest: &mut RunManifest) -> Result<RunArtifacts> {
    manifest.mark_failed("geometry");
    let geom = resolve_geometry(&cfg.geometry)?;

    manifest.mark_failed("eigenstates");
    let target = target_state(&geom.z_grid, &geom.model)?;

    manifest.mark_failed("initial-state");
    let psi0 = match &geom.grid {
        Grid::One(_) => {
            let (psi, overlap) =
                build_initial_state_1d(&geom.z_grid, &geom.model, &cfg.initial, &target)?;
            manifest.set_derived("initial_target_overlap", overlap);
            if overlap > 1e-3 {
                manifest.warnings.push(format!(
                    "initial/target input overlap {overlap:.3e} exceeds 1e-3"
                ));
            }
            psi
        }
        Grid::Two(_) => {
            let (psi, warnings) = build_initial_state_2d(&geom, &cfg.initial)?;
            manifest.warnings.extend(warnings);
            psi
        }
    };

    manifest.mark_failed("field-setup");
    let mut built = build_field(&cfg.field, &geom, &target, cfg.propagation.dt)?;
    for (k, v) in &built.derived {
        manifest.set_derived(k, *v);
    }
    let mut prop_cfg = cfg.propagation.to_config();
    if prop_cfg.t_final == 0.0 {
        prop_cfg.t_final = built.t_final_hint.ok_or_else(|| {
            QwvError::Config(format!(
                "propagation.t_final = 0 but field kind '{}' implies no run length",
                cfg.field.kind
            ))
        })?;
    }
    manifest.set_derived("t_final_au", prop_cfg.t_final);

    manifest.mark_failed("propagation");
    let out = propagate(&psi0, &prop_cfg, &geom.v_static, built.source.as_mut(), Some(&target))
        .map_err(|f| f.error)?;

    manifest.status = "ok".into();
    let last = out.trace.last().expect("trace always has the t=0 record");
    manifest.set_result("p_left_final", last.p_left);
    manifest.set_result("p_right_final", last.p_right);
    manifest.set_result("p_total_final", last.p_total);
    manifest.set_result("p_target_final", last.p_target);
    manifest.set_result("ionization", analysis::ionization_yield(&out.trace)?);
    if last.p_right > 0.0 {
        manifest.set_result("p_target_over_p_right", last.p_target / last.p_right);
    }
    if let Some(r) = last.mean_r {
        manifest.set_result("mean_r_final", r);
    }

    if !cfg.output.dir.is_empty() {
        let dir = Path::new(&cfg.output.dir);
        std::fs::create_dir_all(dir)?;
        write_trace(&dir.join(&cfg.output.trace), &out.trace)?;
        write_field_log(&dir.join(&cfg.output.field), prop_cfg.dt, &out.field_log)?;
        for (i, (t, psi)) in out.snapshots.iter().enumerate() {
            let name = format!("{}_{i:03}.qwv", cfg.output.snapshot_prefix);
            write_snapshot(&dir.join(name), psi, *t)?;
        }
        manifest.save(&dir.join(&cfg.output.manifest))?;
    }

    Ok(RunArtifacts {
        manifest: manifest.clone(),
        trace: out.trace,
        field_log: out.field_log,
        psi_final: out.psi_final,
        snapshots: out.snapshots,
    })
}

/// One completed (or failed) sweep point.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    /// Axis value (k_n in a.u. or σ in bohr).
    pub value: f64,
    /// Directed nuclear kinetic energy k_n²/M in eV (k_n axis only).
    pub kinetic_energy_ev: Option<f64>,
    pub p_right: f64,
    pub p_target: f64,
    /// 2D/1D transfer ratio against the fixed-nuclei reference.
    pub ratio: f64,
    /// "ok" or the error text — failed points are recorded, never dropped.
    pub status: String,
}

pub struct SweepOutcome {
    pub axis: String,
    /// Final P_R of the fixed-nuclei (1D) reference run.
    pub reference_p_right: f64,
    pub points: Vec<SweepPoint>,
}

impl SweepOutcome {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# axis = {}; 1D reference p_right = {:.10e}\n# value ke_ev p_right p_target ratio status\n",
            self.axis, self.reference_p_right
        );
        for p in &self.points {
            out.push_str(&format!(
                "{:.8e} {:.8e} {:.8e} {:.8e} {:.8e} {}\n",
                p.value,
                p.kinetic_energy_ev.unwrap_or(f64::NAN),
                p.p_right,
                p.p_target,
                p.ratio,
                p.status.replace(char::is_whitespace, "_"),
            ));
        }
        out
    }
}

fn sweep_threads() -> usize {
    std::env::var("QWV_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        })
}

/// Run the scenario once per axis value (2D) plus one fixed-nuclei 1D
/// reference, in parallel (capped by QWV_THREADS). Per-point failures are
/// isolated into the point's status.
pub fn run_sweep(cfg: &ScenarioConfig) -> Result<SweepOutcome> {
    let sweep = cfg.sweep.as_ref().ok_or_else(|| {
        QwvError::Config("sweep requested but the config has no [sweep] section".into())
    })?;
    if cfg.geometry.dim != 2 {
        return Err(QwvError::Config("sweeps scan nuclear parameters; geometry.dim must be 2".into()));
    }
    match sweep.axis.as_str() {
        "k_n" | "sigma" => {}
        other => {
            return Err(QwvError::Config(format!(
                "sweep.axis must be 'k_n' or 'sigma' (got '{other}')"
            )))
        }
    }
    if sweep.values.is_empty() {
        return Err(QwvError::Config("sweep.values is empty".into()));
    }

    // fixed-nuclei reference: same scenario collapsed to 1D, no artifacts
    let mut ref_cfg = cfg.clone();
    ref_cfg.geometry.dim = 1;
    ref_cfg.output.dir = String::new();
    ref_cfg.sweep = None;
    ref_cfg.scenario = format!("{}-1d-reference", cfg.scenario);
    let reference = run_scenario(&ref_cfg)?;
    let reference_p_right = reference.trace.last().map(|r| r.p_right).unwrap_or(f64::NAN);

    let point_cfg = |value: f64| -> ScenarioConfig {
        let mut c = cfg.clone();
        c.output.dir = String::new();
        c.sweep = None;
        match sweep.axis.as_str() {
            "k_n" => c.initial.k_n = value,
            _ => c.initial.sigma = value,
        }
        c.scenario = format!("{}-{}={value}", cfg.scenario, sweep.axis);
        c
    };
    let eval = |&value: &f64| -> SweepPoint {
        let ke = (sweep.axis == "k_n").then(|| {
            units::hartree_to_ev(value * value / cfg.propagation.nuclear_mass)
        });
        match run_scenario(&point_cfg(value)) {
            Ok(art) => {
                let last = art.trace.last().expect("non-empty trace");
                SweepPoint {
                    value,
                    kinetic_energy_ev: ke,
                    p_right: last.p_right,
                    p_target: last.p_target,
                    ratio: last.p_right / reference_p_right,
                    status: "ok".into(),
                }
            }
            Err(e) => SweepPoint {
                value,
                kinetic_energy_ev: ke,
                p_right: f64::NAN,
                p_target: f64::NAN,
                ratio: f64::NAN,
                status: e.to_string(),
            },
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep_threads())
        .build()
        .map_err(|e| QwvError::Config(format!("thread pool: {e}")))?;
    let points: Vec<SweepPoint> = pool.install(|| {
        use rayon::prelude::*;
        sweep.values.par_iter().map(eval).collect()
    });

    let outcome = SweepOutcome { axis: sweep.axis.clone(), reference_p_right, points };
    if !cfg.output.dir.is_empty() {
        let dir = Path::new(&cfg.output.dir);
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("sweep.dat"), outcome.to_text())?;
    }
    Ok(outcome)
}

/// Built-in scenario configs for the studied regimes.
pub fn preset(name: &str) -> Option<ScenarioConfig> {
    let text = match name {
        // field-free doublet tunneling at R = 10 (slow-transfer baseline)
        "tunnel-r10" => {
            r#"
scenario = "tunnel-r10"
[geometry]
r = 10.0
[initial]
level = "ground"
side = "left"
[field]
kind = "none"
[propagation]
dt = 0.05
t_final = 9000.0
record_stride = 100
"#
        }
        // closed-loop transfer with fixed nuclei at R = 10
        "lct-r10" => {
            r#"
scenario = "lct-r10"
[geometry]
r = 10.0
e_dc = -5e-3
[initial]
k_e = 0.001
seed = 0.003
[field]
kind = "lct"
lambda = 0.2
e_max = 0.1
[propagation]
dt = 0.01
t_final = 12000.0
record_stride = 500
"#
        }
        // closed-loop transfer with fixed nuclei at R = 20
        "lct-r20" => {
            r#"
scenario = "lct-r20"
[geometry]
r = 20.0
e_dc = -2e-5
[initial]
k_e = 0.001
seed = 0.003
[field]
kind = "lct"
lambda = 2.8
e_max = 0.1
[propagation]
dt = 0.01
t_final = 16000.0
record_stride = 500
"#
        }
        // pump–tunnel–dump scheme with fixed nuclei at R = 20
        "four-state-r20" => {
            r#"
scenario = "four-state-r20"
[geometry]
r = 20.0
[field]
kind = "four-state"
[propagation]
dt = 0.05
t_final = 0.0
record_stride = 100
"#
        }
        // pump–tunnel–dump with moving nuclei, stationary nuclear packet
        "2d-fourstate-kn0" => {
            r#"
scenario = "2d-fourstate-kn0"
[geometry]
dim = 2
r = 20.0
# dz must stay ≲ 0.6 bohr: a coarser z grid cannot translate the electronic
# state smoothly, pinning the electron to the lattice and trapping the nuclei
# in a spurious ~19 fs oscillation instead of letting them move ballistically
z_points = 256
r_points = 512
[initial]
sigma = 0.31
k_n = 0.0
[field]
kind = "four-state"
[propagation]
dt = 0.05
t_final = 0.0
record_stride = 100
"#
        }
        _ => return None,
    };
    Some(crate::io::config::parse_config(text, &[]).expect("presets are valid configs"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_unknown_is_none() {
        for name in ["tunnel-r10", "lct-r10", "lct-r20", "four-state-r20", "2d-fourstate-kn0"] {
            let cfg = preset(name).unwrap();
            assert_eq!(cfg.scenario, name);
        }
        assert!(preset("nope").is_none());
    }

    #[test]
    fn dc_tilt_can_be_excluded_from_propagation() {
        let cfg = preset("lct-r10").unwrap();
        let with_tilt = resolve_geometry(&cfg.geometry).unwrap();

        let mut g = cfg.geometry.clone();
        g.e_dc_in_propagation = false;
        let without = resolve_geometry(&g).unwrap();

        // eigenstates stay localized by the tilt either way
        assert_eq!(without.model.e_dc, with_tilt.model.e_dc);
        // but the propagation potential loses the z·e_dc term
        let zs = without.z_grid.xs();
        for ((a, b), &z) in with_tilt.v_static.iter().zip(&without.v_static).zip(zs) {
            assert!((a - (b + z * cfg.geometry.e_dc)).abs() < 1e-14);
        }
    }

    #[test]
    fn initial_state_1d_momentum_boost() {
        let cfg = preset("lct-r10").unwrap();
        let geom = resolve_geometry(&cfg.geometry).unwrap();
        let target = target_state(&geom.z_grid, &geom.model).unwrap();
        let mut eng = crate::fft::FftEngine::new();

        // without the seed the boost sets ⟨p⟩ = k_e exactly
        let mut unseeded = cfg.initial.clone();
        unseeded.seed = 0.0;
        let (bare, _) =
            build_initial_state_1d(&geom.z_grid, &geom.model, &unseeded, &target).unwrap();
        let p = bare.fourier_forward(&mut eng).unwrap().expectation(|k| k).unwrap();
        assert!((p - 0.001).abs() < 1e-9, "⟨p⟩ = {p}");

        // the seeded mixture dilutes it to ≈ (1−ε)·k_e
        let (psi, overlap) =
            build_initial_state_1d(&geom.z_grid, &geom.model, &cfg.initial, &target).unwrap();
        let p = psi.fourier_forward(&mut eng).unwrap().expectation(|k| k).unwrap();
        assert!((p - 0.997 * 0.001).abs() < 1e-5, "seeded ⟨p⟩ = {p}");
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        let pop = target.inner(&psi).unwrap().norm_sqr();
        assert!(pop > 0.5 * 0.003 && pop < 2.0 * 0.003, "seed population {pop}");
        assert!(overlap < 0.1, "unseeded input overlap {overlap}");
    }

    #[test]
    fn initial_state_1d_without_boost_is_real() {
        let mut cfg = preset("tunnel-r10").unwrap();
        cfg.initial.k_e = 0.0;
        let geom = resolve_geometry(&cfg.geometry).unwrap();
        let target = target_state(&geom.z_grid, &geom.model).unwrap();
        let (psi, _) =
            build_initial_state_1d(&geom.z_grid, &geom.model, &cfg.initial, &target).unwrap();
        let max_im = psi.amps().iter().map(|a| a.im.abs()).fold(0.0, f64::max);
        assert!(max_im < 1e-12, "imaginary residue {max_im}");
    }

    #[test]
    fn initial_state_2d_moments_and_tail_warning() {
        let cfg = preset("2d-fourstate-kn0").unwrap();
        let geom = resolve_geometry(&cfg.geometry).unwrap();
        let (psi, warnings) = build_initial_state_2d(&geom, &cfg.initial).unwrap();
        assert!(warnings.is_empty(), "unexpected warnings: {warnings:?}");
        let r = analysis::mean_internuclear_distance(&psi).unwrap();
        assert!((r - 20.0).abs() < 0.01, "⟨R⟩ = {r}");
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);

        // a packet wider than the distance to the R-edge gets flagged
        let mut wide = cfg.initial.clone();
        wide.sigma = 8.0;
        let (_, warnings) = build_initial_state_2d(&geom, &wide).unwrap();
        assert!(!warnings.is_empty());
    }

    fn nuclear_kinetic(psi: &WaveFunction, g2: &crate::grid::Grid2D, mass: f64) -> f64 {
        let mut eng = crate::fft::FftEngine::new();
        let mut amps = psi.amps().to_vec();
        eng.raw_forward_2d(&mut amps, g2.r.n(), g2.z.n());
        let (mut num, mut den) = (0.0, 0.0);
        for (ir, &kr) in g2.r.ks().iter().enumerate() {
            for iz in 0..g2.z.n() {
                let d = amps[ir * g2.z.n() + iz].norm_sqr();
                num += d * kr * kr / mass;
                den += d;
            }
        }
        num / den
    }

    #[test]
    fn nuclear_kinetic_energy_matches_gaussian_formula() {
        // ⟨T_R⟩ = (k_n² + 1/4σ²)/M for the 1/M kinetic convention; exact only
        // when the electronic factor carries no R dependence
        let mut cfg = preset("2d-fourstate-kn0").unwrap();
        cfg.initial.k_n = 0.5;
        cfg.initial.sigma = 0.31;
        cfg.initial.electronic_factor = "frozen".into();
        let geom = resolve_geometry(&cfg.geometry).unwrap();
        let (psi, _) = build_initial_state_2d(&geom, &cfg.initial).unwrap();
        let g2 = geom.grid.as_2d().unwrap();
        let mass = cfg.propagation.nuclear_mass;
        let t_num = nuclear_kinetic(&psi, g2, mass);
        let sigma = cfg.initial.sigma;
        let t_ref = (cfg.initial.k_n.powi(2) + 1.0 / (4.0 * sigma * sigma)) / mass;
        assert!(
            (t_num - t_ref).abs() < 1e-6 * t_ref.max(1.0),
            "⟨T_R⟩ = {t_num}, analytic {t_ref}"
        );
    }

    #[test]
    fn adiabatic_factor_adds_only_the_parametric_kinetic_term() {
        // ψ_elec(z;R) ≈ φ(z + R/2) near the left well, so ∂_Rψ ≈ φ'/2 and the
        // adiabatic state carries ⟨T_R⟩ ≈ frozen value + ⟨p_z²⟩/(4M) ≈ 4e-5
        let mut cfg = preset("2d-fourstate-kn0").unwrap();
        cfg.initial.k_n = 0.5;
        let geom = resolve_geometry(&cfg.geometry).unwrap();
        let g2 = geom.grid.as_2d().unwrap();
        let mass = cfg.propagation.nuclear_mass;
        let (adiabatic, _) = build_initial_state_2d(&geom, &cfg.initial).unwrap();
        cfg.initial.electronic_factor = "frozen".into();
        let (frozen, _) = build_initial_state_2d(&geom, &cfg.initial).unwrap();
        let extra = nuclear_kinetic(&adiabatic, g2, mass) - nuclear_kinetic(&frozen, g2, mass);
        assert!(
            extra > 0.0 && extra < 2e-4,
            "parametric ⟨T_R⟩ contribution = {extra}"
        );
    }

    #[test]
    fn k_n_sign_flips_momentum_not_density() {
        let cfg = preset("2d-fourstate-kn0").unwrap();
        let geom = resolve_geometry(&cfg.geometry).unwrap();
        let mut plus = cfg.initial.clone();
        plus.k_n = 0.8;
        let mut minus = cfg.initial.clone();
        minus.k_n = -0.8;
        let (pp, _) = build_initial_state_2d(&geom, &plus).unwrap();
        let (pm, _) = build_initial_state_2d(&geom, &minus).unwrap();
        let dp = pp.density();
        let dm = pm.density();
        let max_diff = dp
            .iter()
            .zip(&dm)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_diff < 1e-14, "density changed by {max_diff}");
    }

    #[test]
    fn unknown_field_kind_is_rejected() {
        let mut cfg = preset("tunnel-r10").unwrap();
        cfg.field.kind = "wizardry".into();
        let err = match run_scenario(&cfg) {
            Err(e) => e.to_string(),
            Ok(_) => panic!("unknown field kind was accepted"),
        };
        assert!(err.contains("wizardry"));
    }

    #[test]
    fn free_transfer_time_estimate() {
        // sanity scale for the slow-transfer regime: R/k_e at R=20,
        // k_e=0.001 is 2e4 a.u. ≈ 484 fs
        let t = 20.0 / 0.001;
        assert_eq!(t, 2e4);
        assert!((units::au_to_fs(t) - 484.0).abs() < 1.0);
    }
}
