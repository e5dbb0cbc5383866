//! Command-line surface. Exit codes: 0 success, 1 usage/config error,
//! 2 numeric failure.

use crate::analysis;
use crate::eigensolver::{fgh_solve, localized_pair, tunneling_time, Level};
use crate::error::{QwvError, Result};
use crate::experiments::{resolve_geometry, run_scenario, run_sweep, preset};
use crate::io::config::{load_config, parse_config, ScenarioConfig};
use crate::io::read_snapshot;
use crate::potentials::{bo_curves, soft_core_1d};
use crate::units;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "qwv", version, about = "Spectral TDSE simulator for laser-driven electron transfer between separated protons")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound-state spectrum, localized states and tunneling times.
    Eigen(ConfigArgs),
    /// Run one scenario (any field kind) and write its artifacts.
    Propagate(ConfigArgs),
    /// Run a closed-loop local-control scenario.
    Lct(ConfigArgs),
    /// Scan a nuclear parameter axis, with 2D/1D transfer ratios.
    Sweep(ConfigArgs),
    /// Husimi phase-space map of a saved 1D snapshot.
    Husimi(HusimiArgs),
    /// Electronic-channel decomposition of a saved 2D snapshot.
    BoProject(BoArgs),
    /// Born–Oppenheimer potential curves over an R scan.
    Curves(CurvesArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Scenario config file (TOML).
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario name (tunnel-r10, lct-r10, lct-r20,
    /// four-state-r20, 2d-fourstate-kn0).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Dotted-path config overrides, e.g. --set propagation.dt=0.05.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ScenarioConfig> {
        match (&self.config, &self.preset) {
            (Some(path), None) => load_config(path, &self.set),
            (None, Some(name)) => {
                let cfg = preset(name).ok_or_else(|| {
                    QwvError::Config(format!("unknown preset '{name}'"))
                })?;
                if self.set.is_empty() {
                    return Ok(cfg);
                }
                let text = toml::to_string(&cfg)
                    .map_err(|e| QwvError::Config(format!("preset serialization: {e}")))?;
                parse_config(&text, &self.set)
            }
            _ => Err(QwvError::Config("exactly one of --config or --preset is required".into())),
        }
    }
}

#[derive(Args)]
struct HusimiArgs {
    /// 1D snapshot file (QWV1).
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Output text file (z p value triples).
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
    /// Coherent-state position width (bohr).
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 161)]
    z_points: usize,
    #[arg(long, default_value_t = 161)]
    p_points: usize,
    #[arg(long, default_value_t = -2.0)]
    p_min: f64,
    #[arg(long, default_value_t = 2.0)]
    p_max: f64,
}

#[derive(Args)]
struct BoArgs {
    /// 2D snapshot file (QWV1).
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Output text file (per-R channel densities).
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
    /// Number of electronic channels K.
    #[arg(long, default_value_t = 4)]
    states: usize,
    #[arg(long, default_value_t = 1.0)]
    softening: f64,
}

#[derive(Args)]
struct CurvesArgs {
    /// Output text file (R then one column per curve).
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    r_min: f64,
    #[arg(long, default_value_t = 40.0)]
    r_max: f64,
    #[arg(long, default_value_t = 200)]
    r_points: usize,
    #[arg(long, default_value_t = 4)]
    states: usize,
    #[arg(long, default_value_t = 512)]
    z_points: usize,
    #[arg(long, default_value_t = -80.0)]
    z_min: f64,
    #[arg(long, default_value_t = 80.0)]
    z_max: f64,
}

/// Parse argv and dispatch; returns the process exit status.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_command(cmd: Command) -> Result<()> {
    match cmd {
        Command::Eigen(args) => cmd_eigen(&args.resolve()?),
        Command::Propagate(args) => cmd_propagate(&args.resolve()?),
        Command::Lct(args) => {
            let cfg = args.resolve()?;
            if cfg.field.kind != "lct" {
                return Err(QwvError::Config(format!(
                    "the lct subcommand needs field.kind = \"lct\" (got \"{}\")",
                    cfg.field.kind
                )));
            }
            cmd_propagate(&cfg)
        }
        Command::Sweep(args) => cmd_sweep(&args.resolve()?),
        Command::Husimi(args) => cmd_husimi(&args),
        Command::BoProject(args) => cmd_bo_project(&args),
        Command::Curves(args) => cmd_curves(&args),
    }
}

fn cmd_eigen(cfg: &ScenarioConfig) -> Result<()> {
    let geom = resolve_geometry(&cfg.geometry)?;
    let v = geom.z_grid.sample(|z| soft_core_1d(z, &geom.model));
    let pairs = fgh_solve(&geom.z_grid, &v, 6)?;
    println!("# electronic spectrum at R = {} bohr (e_dc = {})", geom.model.r, geom.model.e_dc);
    println!("# n  energy_hartree        energy_ev        mean_z_bohr");
    for (n, p) in pairs.iter().enumerate() {
        println!(
            "{n}  {:+.12e}  {:+.8e}  {:+.6e}",
            p.energy,
            units::hartree_to_ev(p.energy),
            p.mean_z
        );
    }
    for (name, lo, hi) in [("ground", 0, 1), ("first-excited", 2, 3)] {
        match tunneling_time(pairs[lo].energy, pairs[hi].energy) {
            Ok(rep) => println!(
                "# {name} doublet: splitting {:.6e} hartree, inversion time {:.4} fs",
                rep.splitting, rep.time_fs
            ),
            Err(e) => println!("# {name} doublet: {e}"),
        }
    }
    let pair = localized_pair(&geom.z_grid, &geom.model, Level::Ground)?;
    println!(
        "# localized ground pair: <z>_L = {:.4}, <z>_R = {:.4}, overlap = {:.3e}",
        pair.left.mean_z, pair.right.mean_z, pair.overlap
    );
    Ok(())
}

fn cmd_propagate(cfg: &ScenarioConfig) -> Result<()> {
    let artifacts = run_scenario(cfg)?;
    let last = artifacts.trace.last().expect("non-empty trace");
    println!(
        "{}: t = {:.2} fs  P_L = {:.6}  P_R = {:.6}  P_T = {:.6}  P_target = {:.6}  ionization = {:.6}",
        cfg.scenario,
        units::au_to_fs(last.t),
        last.p_left,
        last.p_right,
        last.p_total,
        last.p_target,
        analysis::ionization_yield(&artifacts.trace)?,
    );
    if !cfg.output.dir.is_empty() {
        println!("artifacts written to {}", cfg.output.dir);
    }
    Ok(())
}

fn cmd_sweep(cfg: &ScenarioConfig) -> Result<()> {
    let outcome = run_sweep(cfg)?;
    print!("{}", outcome.to_text());
    if !cfg.output.dir.is_empty() {
        println!("# sweep table written to {}/sweep.dat", cfg.output.dir);
    }
    Ok(())
}

fn cmd_husimi(args: &HusimiArgs) -> Result<()> {
    let (psi, t) = read_snapshot(&args.input)?;
    let g = psi.grid().as_1d()?.clone();
    let zc: Vec<f64> = (0..args.z_points)
        .map(|i| g.x_min() + (g.x_max() - g.x_min()) * i as f64 / (args.z_points - 1) as f64)
        .collect();
    let pc: Vec<f64> = (0..args.p_points)
        .map(|i| args.p_min + (args.p_max - args.p_min) * i as f64 / (args.p_points - 1) as f64)
        .collect();
    let map = analysis::husimi(&psi, args.sigma, &zc, &pc)?;
    std::fs::write(&args.output, map.to_text())?;
    println!(
        "husimi of {} (t = {:.2} fs): total = {:.6}, written to {}",
        args.input.display(),
        units::au_to_fs(t),
        map.total(),
        args.output.display()
    );
    Ok(())
}

fn cmd_bo_project(args: &BoArgs) -> Result<()> {
    let (psi, t) = read_snapshot(&args.input)?;
    let g2 = psi.grid().as_2d()?.clone();
    let basis = analysis::electronic_basis(&g2, args.states, args.softening)?;
    let decomp = analysis::bo_project(&psi, &basis, args.states)?;

    println!("# channel populations at t = {:.2} fs", units::au_to_fs(t));
    for k in 0..args.states {
        println!("channel {k}: ||chi||^2 = {:.8e}", decomp.channel_norm_sqr(k));
    }
    println!("captured = {:.8e} of ||psi||^2 = {:.8e}", decomp.captured_norm_sqr(), psi.norm_sqr());
    if args.states >= 4 {
        println!("S_34 (channels 2,3) = {:.6}", decomp.overlap(2, 3));
    }

    let mut text = String::from("# R_bohr  |chi_k(R)|^2 per channel\n");
    for (ir, &r) in decomp.r_values.iter().enumerate() {
        text.push_str(&format!("{r:.8e}"));
        for chan in &decomp.channels {
            text.push_str(&format!(" {:.8e}", chan[ir].norm_sqr()));
        }
        text.push('\n');
    }
    std::fs::write(&args.output, text)?;
    Ok(())
}

fn cmd_curves(args: &CurvesArgs) -> Result<()> {
    let z_grid = crate::grid::Grid1D::new(args.z_points, args.z_min, args.z_max)?;
    let r_values: Vec<f64> = (0..args.r_points)
        .map(|i| args.r_min + (args.r_max - args.r_min) * i as f64 / (args.r_points - 1).max(1) as f64)
        .collect();
    let set = bo_curves(&r_values, &z_grid, args.states)?;
    std::fs::write(&args.output, set.to_text())?;
    println!("{} curves over {} R points written to {}", args.states, args.r_points, args.output.display());
    Ok(())
}
