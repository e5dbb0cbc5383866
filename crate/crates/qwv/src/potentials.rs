//! Soft-core Coulomb model for one electron shared by two protons, the
//! static-field tilt, the length-gauge dipole coupling, and
//! Born–Oppenheimer curves over the internuclear distance.
//!
//! The potential is
//! `V(z,R) = -1/√(1+(z-R/2)²) - 1/√(1+(z+R/2)²) + 1/R + z·E_DC`,
//! everywhere finite. The 1/R nuclear repulsion is kept in 1D mode as a
//! constant shift so 1D and 2D energy scales agree.

use crate::eigensolver::fgh_solve;
use crate::error::{QwvError, Result};
use crate::grid::Grid1D;

/// Fixed-nuclei soft-core model: internuclear distance, softening and DC tilt.
///
/// The softening parameter is 1 in all published numbers; changing it is an
/// expert override.
#[derive(Debug, Clone, Copy)]
pub struct PotentialModel {
    pub r: f64,
    pub softening: f64,
    pub e_dc: f64,
}

impl PotentialModel {
    pub fn new(r: f64) -> Result<Self> {
        if r <= 0.0 {
            return Err(QwvError::Structural(format!(
                "internuclear distance must be positive (got {r})"
            )));
        }
        Ok(Self { r, softening: 1.0, e_dc: 0.0 })
    }

    pub fn with_dc(mut self, e_dc: f64) -> Self {
        self.e_dc = e_dc;
        self
    }

    /// Expert override; all paper values assume softening 1.
    pub fn with_softening(mut self, softening: f64) -> Result<Self> {
        if softening <= 0.0 {
            return Err(QwvError::Structural(format!(
                "softening must be positive (got {softening})"
            )));
        }
        self.softening = softening;
        Ok(self)
    }
}

/// Fixed-R soft-core potential including the 1/R shift and the DC tilt.
pub fn soft_core_1d(z: f64, model: &PotentialModel) -> f64 {
    soft_core_bare(z, model.r, model.softening) + z * model.e_dc
}

/// Two-coordinate form with R a live coordinate; any DC tilt couples to z
/// only and is handled by the caller's field term.
pub fn soft_core_2d(z: f64, r: f64, softening: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(QwvError::Structural(format!(
            "R = {r} is outside the grid domain (R > 0 required)"
        )));
    }
    Ok(soft_core_bare(z, r, softening))
}

fn soft_core_bare(z: f64, r: f64, softening: f64) -> f64 {
    let a = z - 0.5 * r;
    let b = z + 0.5 * r;
    -1.0 / (softening + a * a).sqrt() - 1.0 / (softening + b * b).sqrt() + 1.0 / r
}

/// Length-gauge coupling operator: μ(z) = z, sign fixed by the +zE(t)
/// Hamiltonian term.
pub fn dipole(z: f64) -> f64 {
    z
}

/// Barrier top and well minima of the fixed-R potential.
#[derive(Debug, Clone)]
pub struct BarrierInfo {
    /// V at z = 0 (top of the internal Coulomb barrier).
    pub barrier_top: f64,
    /// (z, V) at each interior well minimum, left to right.
    pub well_minima: Vec<(f64, f64)>,
}

/// Locate the internal barrier and the two well minima by grid scan plus
/// golden-section refinement to 1e-8 bohr.
pub fn barrier_info(model: &PotentialModel) -> Result<BarrierInfo> {
    if model.e_dc.abs() >= 1e-2 {
        return Err(QwvError::Structural(format!(
            "barrier_info requires |e_dc| < 1e-2 (got {})",
            model.e_dc
        )));
    }
    let barrier_top = soft_core_1d(0.0, model);
    let span = model.r.max(2.0);
    let n = 4000;
    let lo = -span;
    let hi = span;
    let h = (hi - lo) / n as f64;
    let v: Vec<f64> = (0..=n).map(|i| soft_core_1d(lo + i as f64 * h, model)).collect();
    let mut minima = Vec::new();
    for i in 1..n {
        if v[i] < v[i - 1] && v[i] < v[i + 1] {
            let a = lo + (i - 1) as f64 * h;
            let b = lo + (i + 1) as f64 * h;
            let z = golden_min(|z| soft_core_1d(z, model), a, b, 1e-8);
            minima.push((z, soft_core_1d(z, model)));
        }
    }
    // a single merged well at z ≈ 0 means there is no interior barrier
    let interior: Vec<(f64, f64)> = minima
        .into_iter()
        .filter(|&(_, vm)| vm < barrier_top - 1e-12)
        .collect();
    if interior.len() < 2 {
        return Err(QwvError::DegenerateGeometry(format!(
            "no double-well structure at R = {} (found {} interior minima)",
            model.r,
            interior.len()
        )));
    }
    Ok(BarrierInfo { barrier_top, well_minima: interior })
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Born–Oppenheimer curves: lowest K electronic eigenvalues per R
/// (1/R repulsion already included through the potential).
#[derive(Debug, Clone)]
pub struct BoCurveSet {
    pub r_values: Vec<f64>,
    /// `curves[i][k]` = V_{k+1}(r_values[i]), eigenvalues sorted ascending.
    pub curves: Vec<Vec<f64>>,
}

impl BoCurveSet {
    pub fn n_curves(&self) -> usize {
        self.curves.first().map_or(0, |c| c.len())
    }

    /// Columnar text: header row with units, then R and V_1..V_K per line.
    pub fn to_text(&self) -> String {
        let k = self.n_curves();
        let mut out = String::from("# R(bohr)");
        for i in 1..=k {
            out.push_str(&format!(" V_{i}(hartree)"));
        }
        out.push('\n');
        for (r, vs) in self.r_values.iter().zip(&self.curves) {
            out.push_str(&format!("{r:.8}"));
            for v in vs {
                out.push_str(&format!(" {v:.12}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Diagonalize the fixed-R electronic Hamiltonian at each requested R.
pub fn bo_curves(r_values: &[f64], z_grid: &Grid1D, n_curves: usize) -> Result<BoCurveSet> {
    let mut curves = Vec::with_capacity(r_values.len());
    for &r in r_values {
        let model = PotentialModel::new(r)?;
        let v = z_grid.sample(|z| soft_core_1d(z, &model));
        let pairs = fgh_solve(z_grid, &v, n_curves)?;
        curves.push(pairs.iter().map(|p| p.energy).collect());
    }
    Ok(BoCurveSet { r_values: r_values.to_vec(), curves })
}
