//! Observables: domain populations, target yield, ionization, Husimi
//! phase-space maps, Born–Oppenheimer channel projections and ⟨R⟩.

use crate::eigensolver::fgh_solve;
use crate::error::{QwvError, Result};
use crate::grid::{Grid, Grid2D};
use crate::potentials::soft_core_2d;
use crate::propagator::ObservableTrace;
use crate::wavefunction::WaveFunction;
use num_complex::Complex64;

/// Left/right domain populations `(P_L, P_R)`:
/// P_L = ∫_{z<0}|ψ|², P_R = ∫_{z>0}|ψ|² (unsquared domain norms, so the
/// populations and the absorbed fraction sum to 1; a grid point exactly at
/// z = 0 is split evenly). For 2D states the R coordinate is integrated out.
pub fn domain_populations(psi: &WaveFunction) -> Result<(f64, f64)> {
    let dv = psi.cell_volume();
    let mut left = 0.0;
    let mut right = 0.0;
    let mut add = |z: f64, d: f64| {
        // z grids are symmetric; the midpoint lands exactly on 0.0
        if z < 0.0 {
            left += d;
        } else if z > 0.0 {
            right += d;
        } else {
            left += 0.5 * d;
            right += 0.5 * d;
        }
    };
    match psi.grid() {
        Grid::One(g) => {
            for (a, &z) in psi.amps().iter().zip(g.xs()) {
                add(z, a.norm_sqr());
            }
        }
        Grid::Two(g) => {
            let nz = g.z.n();
            for row in psi.amps().chunks_exact(nz) {
                for (a, &z) in row.iter().zip(g.z.xs()) {
                    add(z, a.norm_sqr());
                }
            }
        }
    }
    Ok((left * dv, right * dv))
}

/// |⟨ψ_target|Ψ⟩|². For a 2D state with a 1D electronic target this is the
/// R-integrated electronic overlap ∫dR |⟨ψ_target(z)|Ψ(z,R)⟩_z|².
pub fn target_projection(psi: &WaveFunction, target: &WaveFunction) -> Result<f64> {
    match (psi.grid(), target.grid()) {
        (Grid::One(_), Grid::One(_)) => Ok(psi.inner(target)?.norm_sqr()),
        (Grid::Two(g2), Grid::One(gt)) => {
            if !g2.z.same_as(gt) {
                return Err(QwvError::GridMismatch(
                    "electronic target grid does not match the 2D z-grid".into(),
                ));
            }
            let nz = g2.z.n();
            let dz = g2.z.dx();
            let dr = g2.r.dx();
            let mut total = 0.0;
            for row in psi.amps().chunks_exact(nz) {
                let mut o = Complex64::ZERO;
                for (a, t) in row.iter().zip(target.amps()) {
                    o += t.conj() * a;
                }
                total += (o * dz).norm_sqr();
            }
            Ok(total * dr)
        }
        _ => Err(QwvError::GridMismatch(
            "target projection needs a 1D pair or a 2D state with a 1D target".into(),
        )),
    }
}

/// Positive phase-space density H(z₀,p₀) = |⟨g_{z₀,p₀}|ψ⟩|²/(2π) with g a
/// normalized coherent state of position width σ_h.
#[derive(Debug, Clone)]
pub struct HusimiMap {
    pub z_centers: Vec<f64>,
    pub p_centers: Vec<f64>,
    /// Row-major with z slow: `values[iz * p_centers.len() + ip]`.
    pub values: Vec<f64>,
    pub sigma_h: f64,
}

impl HusimiMap {
    pub fn value(&self, iz: usize, ip: usize) -> f64 {
        self.values[iz * self.p_centers.len() + ip]
    }

    /// ∫ H dp₀ per z-center (a σ_h-smoothed position density).
    pub fn p_marginal(&self) -> Vec<f64> {
        let dp = step_of(&self.p_centers);
        self.values
            .chunks_exact(self.p_centers.len())
            .map(|row| row.iter().sum::<f64>() * dp)
            .collect()
    }

    /// Σ values·dz·dp (≈ norm² of the analyzed state when the center grids
    /// cover its support).
    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * step_of(&self.z_centers) * step_of(&self.p_centers)
    }

    /// Gridded text export: one `z p value` triple per line.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# z_bohr  p_au  husimi\n");
        for (iz, &z) in self.z_centers.iter().enumerate() {
            for (ip, &p) in self.p_centers.iter().enumerate() {
                out.push_str(&format!("{z:.8e} {p:.8e} {:.8e}\n", self.value(iz, ip)));
            }
        }
        out
    }
}

fn step_of(centers: &[f64]) -> f64 {
    if centers.len() > 1 {
        (centers[centers.len() - 1] - centers[0]) / (centers.len() - 1) as f64
    } else {
        1.0
    }
}

/// Husimi transform of a 1D state over the given center grids.
pub fn husimi(
    psi: &WaveFunction,
    sigma_h: f64,
    z_centers: &[f64],
    p_centers: &[f64],
) -> Result<HusimiMap> {
    if sigma_h <= 0.0 {
        return Err(QwvError::Config(format!(
            "Husimi width must be positive (got {sigma_h})"
        )));
    }
    let g = psi.grid().as_1d()?;
    let dx = g.dx();
    let norm = (2.0 * std::f64::consts::PI * sigma_h * sigma_h).powf(-0.25);
    let xs = g.xs();
    let amps = psi.amps();
    let inv_4s2 = 1.0 / (4.0 * sigma_h * sigma_h);
    let two_pi = 2.0 * std::f64::consts::PI;

    let mut values = vec![0.0; z_centers.len() * p_centers.len()];
    for (iz, &z0) in z_centers.iter().enumerate() {
        // envelope-weighted amplitudes once per z0; only the support of the
        // Gaussian (±8σ) contributes
        let lo = xs.partition_point(|&x| x < z0 - 8.0 * sigma_h);
        let hi = xs.partition_point(|&x| x <= z0 + 8.0 * sigma_h);
        let weighted: Vec<Complex64> = (lo..hi)
            .map(|j| {
                let w = norm * (-(xs[j] - z0) * (xs[j] - z0) * inv_4s2).exp();
                amps[j] * w
            })
            .collect();
        for (ip, &p0) in p_centers.iter().enumerate() {
            let mut o = Complex64::ZERO;
            for (j, wamp) in weighted.iter().enumerate() {
                // ⟨g|ψ⟩: conjugate of the coherent-state phase e^{ip₀z}
                o += wamp * Complex64::from_polar(1.0, -p0 * xs[lo + j]);
            }
            values[iz * p_centers.len() + ip] = (o * dx).norm_sqr() / two_pi;
        }
    }
    Ok(HusimiMap {
        z_centers: z_centers.to_vec(),
        p_centers: p_centers.to_vec(),
        values,
        sigma_h,
    })
}

/// Electronic eigenbasis φ_k(z; R) on every R-grid point, with the
/// arbitrary FGH sign fixed by continuity in R.
pub struct ElectronicBasis {
    pub grid: Grid2D,
    pub n_states: usize,
    /// `states[ir][k]` is φ_k(·; R_ir) sampled on the z-grid (real).
    pub states: Vec<Vec<Vec<f64>>>,
    pub energies: Vec<Vec<f64>>,
}

/// Diagonalize the electronic soft-core Hamiltonian at every R of the 2D
/// grid. Phase continuity: each φ_k(R) is sign-aligned with φ_k(R−dR); R
/// values where the aligned overlap still falls below 0.5 (the repair is
/// ambiguous, e.g. across an avoided crossing at this K) are reported as a
/// diagnostic error.
pub fn electronic_basis(grid: &Grid2D, n_states: usize, softening: f64) -> Result<ElectronicBasis> {
    let nz = grid.z.n();
    let mut states: Vec<Vec<Vec<f64>>> = Vec::with_capacity(grid.r.n());
    let mut energies = Vec::with_capacity(grid.r.n());
    let mut bad_r = Vec::new();
    for &r in grid.r.xs() {
        let mut v = vec![0.0; nz];
        for (j, &z) in grid.z.xs().iter().enumerate() {
            v[j] = soft_core_2d(z, r, softening)?;
        }
        let pairs = fgh_solve(&grid.z, &v, n_states)?;
        let mut here: Vec<Vec<f64>> = pairs
            .iter()
            .map(|p| p.state.amps().iter().map(|a| a.re).collect())
            .collect();
        energies.push(pairs.iter().map(|p| p.energy).collect());
        if let Some(prev) = states.last() {
            let dz = grid.z.dx();
            for (k, phi) in here.iter_mut().enumerate() {
                let o: f64 = prev[k].iter().zip(phi.iter()).map(|(a, b)| a * b).sum::<f64>() * dz;
                if o < 0.0 {
                    for x in phi.iter_mut() {
                        *x = -*x;
                    }
                }
                if o.abs() < 0.5 {
                    bad_r.push(r);
                }
            }
        }
        states.push(here);
    }
    if !bad_r.is_empty() {
        bad_r.dedup();
        return Err(QwvError::PhaseContinuity(bad_r));
    }
    Ok(ElectronicBasis { grid: grid.clone(), n_states, states, energies })
}

/// Nuclear channel functions χ_k(R) = ⟨φ_k(·;R)|Ψ(·,R)⟩_z.
pub struct ChannelDecomposition {
    pub r_values: Vec<f64>,
    pub dr: f64,
    /// `channels[k][ir]`.
    pub channels: Vec<Vec<Complex64>>,
}

impl ChannelDecomposition {
    /// ‖χ_k‖² = ∫|χ_k|²dR.
    pub fn channel_norm_sqr(&self, k: usize) -> f64 {
        self.channels[k].iter().map(|c| c.norm_sqr()).sum::<f64>() * self.dr
    }

    /// Normalized nuclear-channel overlap |⟨χ_a|χ_b⟩|/(‖χ_a‖‖χ_b‖).
    pub fn overlap(&self, a: usize, b: usize) -> f64 {
        let mut o = Complex64::ZERO;
        for (x, y) in self.channels[a].iter().zip(&self.channels[b]) {
            o += x.conj() * y;
        }
        let na = self.channel_norm_sqr(a).sqrt();
        let nb = self.channel_norm_sqr(b).sqrt();
        if na == 0.0 || nb == 0.0 {
            return 0.0;
        }
        (o * self.dr).norm() / (na * nb)
    }

    /// Σ_k ‖χ_k‖² (≤ ‖Ψ‖² by Bessel).
    pub fn captured_norm_sqr(&self) -> f64 {
        (0..self.channels.len()).map(|k| self.channel_norm_sqr(k)).sum()
    }
}

/// Project a 2D state onto the first `k_max` electronic channels.
pub fn bo_project(
    psi: &WaveFunction,
    basis: &ElectronicBasis,
    k_max: usize,
) -> Result<ChannelDecomposition> {
    let g = psi.grid().as_2d()?;
    if !g.same_as(&basis.grid) {
        return Err(QwvError::GridMismatch(
            "2D state and electronic basis grids differ".into(),
        ));
    }
    if k_max > basis.n_states {
        return Err(QwvError::Config(format!(
            "requested {k_max} channels but the basis holds {}",
            basis.n_states
        )));
    }
    let nz = g.z.n();
    let dz = g.z.dx();
    let mut channels = vec![vec![Complex64::ZERO; g.r.n()]; k_max];
    for (ir, row) in psi.amps().chunks_exact(nz).enumerate() {
        for (k, chan) in channels.iter_mut().enumerate() {
            let phi = &basis.states[ir][k];
            let mut o = Complex64::ZERO;
            for (a, &p) in row.iter().zip(phi) {
                o += a * p;
            }
            chan[ir] = o * dz;
        }
    }
    Ok(ChannelDecomposition { r_values: g.r.xs().to_vec(), dr: g.r.dx(), channels })
}

/// Rebuild Σ_k φ_k(z;R)·χ_k(R) from a decomposition (the K-truncation of Ψ).
pub fn bo_resynthesize(
    basis: &ElectronicBasis,
    decomp: &ChannelDecomposition,
) -> Result<WaveFunction> {
    let g = &basis.grid;
    let nz = g.z.n();
    let mut amps = vec![Complex64::ZERO; g.len()];
    for ir in 0..g.r.n() {
        for (k, chan) in decomp.channels.iter().enumerate() {
            let phi = &basis.states[ir][k];
            let c = chan[ir];
            for iz in 0..nz {
                amps[ir * nz + iz] += c * phi[iz];
            }
        }
    }
    WaveFunction::new(Grid::Two(g.clone()), amps)
}

/// ⟨R⟩ of a 2D state.
pub fn mean_internuclear_distance(psi: &WaveFunction) -> Result<f64> {
    let g = psi.grid().as_2d()?;
    let nz = g.z.n();
    let mut num = 0.0;
    let mut den = 0.0;
    for (row, &r) in psi.amps().chunks_exact(nz).zip(g.r.xs()) {
        let d: f64 = row.iter().map(|a| a.norm_sqr()).sum();
        num += d * r;
        den += d;
    }
    if den == 0.0 {
        return Err(QwvError::ZeroNorm);
    }
    Ok(num / den)
}

/// Absorbed (ionized) fraction: 1 − P_T at the end of the trace.
pub fn ionization_yield(trace: &ObservableTrace) -> Result<f64> {
    match trace.last() {
        Some(rec) => Ok(1.0 - rec.p_total),
        None => Err(QwvError::Structural("ionization yield of an empty trace".into())),
    }
}
