//! Complex amplitudes on a grid, inner products, expectation values and the
//! position/momentum transform pair.
//!
//! Normalization convention: integrals are discrete sums times the cell
//! volume (periodic spectral grid, no end corrections), so
//! `norm² = Σ|ψ|²·dV`.

use crate::error::{QwvError, Result};
use crate::fft::FftEngine;
use crate::grid::{Grid, Grid1D};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct WaveFunction {
    grid: Grid,
    amps: Vec<Complex64>,
}

impl WaveFunction {
    pub fn new(grid: Grid, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.len() {
            return Err(QwvError::Structural(format!(
                "amplitude count {} does not match grid size {}",
                amps.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, amps })
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self { grid, amps: vec![Complex64::ZERO; n] }
    }

    /// Normalized Gaussian `exp(-(x-center)²/(4σ²)) e^{i k0 x}` on a 1D grid
    /// (σ is the position-density standard deviation).
    pub fn gaussian_1d(grid: &Grid1D, center: f64, sigma: f64, k0: f64) -> Self {
        let amps = grid
            .xs()
            .iter()
            .map(|&x| {
                let env = (-(x - center).powi(2) / (4.0 * sigma * sigma)).exp();
                Complex64::from_polar(env, k0 * x)
            })
            .collect();
        let mut psi = Self { grid: Grid::One(grid.clone()), amps };
        psi.normalize();
        psi
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn cell_volume(&self) -> f64 {
        self.grid.cell_volume()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.cell_volume()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            let s = 1.0 / n;
            for a in &mut self.amps {
                *a *= s;
            }
        }
    }

    pub fn scale(&mut self, s: Complex64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    /// ⟨self|other⟩ = Σ conj(self)·other·dV.
    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64> {
        if !self.grid.same_as(&other.grid) {
            return Err(QwvError::GridMismatch(
                "inner product of states on different grids".into(),
            ));
        }
        let s: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.cell_volume())
    }

    /// ⟨self|f|other⟩ for a real-valued grid function (not norm-divided).
    pub fn matrix_element(&self, f: &[f64], other: &WaveFunction) -> Result<Complex64> {
        if !self.grid.same_as(&other.grid) || f.len() != self.amps.len() {
            return Err(QwvError::GridMismatch(
                "matrix element of states on different grids".into(),
            ));
        }
        let s: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .zip(f)
            .map(|((a, b), &v)| a.conj() * b * v)
            .sum();
        Ok(s * self.cell_volume())
    }

    /// ⟨ψ|f|ψ⟩ / ⟨ψ|ψ⟩ for a real-valued grid function.
    pub fn expectation(&self, f: &[f64]) -> Result<f64> {
        if f.len() != self.amps.len() {
            return Err(QwvError::GridMismatch(
                "grid function length does not match state".into(),
            ));
        }
        let norm2 = self.norm_sqr();
        if norm2 <= 0.0 {
            return Err(QwvError::ZeroNorm);
        }
        let s: f64 = self
            .amps
            .iter()
            .zip(f)
            .map(|(a, &v)| a.norm_sqr() * v)
            .sum();
        Ok(s * self.cell_volume() / norm2)
    }

    /// Multiply by the plane-wave phase `e^{i k_e z}` (momentum boost).
    pub fn boost(&mut self, k_e: f64) -> Result<()> {
        match self.grid.clone() {
            Grid::One(g) => {
                for (a, &z) in self.amps.iter_mut().zip(g.xs()) {
                    *a *= Complex64::from_polar(1.0, k_e * z);
                }
            }
            Grid::Two(g) => {
                let nz = g.z.n();
                for row in self.amps.chunks_exact_mut(nz) {
                    for (a, &z) in row.iter_mut().zip(g.z.xs()) {
                        *a *= Complex64::from_polar(1.0, k_e * z);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn density(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Unitary transform to the momentum representation (1D only).
    pub fn fourier_forward(&self, eng: &mut FftEngine) -> Result<MomentumRep> {
        let g = self.grid.as_1d()?.clone();
        let mut amps = self.amps.clone();
        eng.raw_forward(&mut amps, g.n());
        // ψ̃(k_j) = (dx/√(2π)) Σ_m ψ_m e^{-i k_j x_m}; the DFT supplies the
        // e^{-i k_j m dx} part, the x_min phase is applied explicitly.
        let scale = g.dx() / (2.0 * std::f64::consts::PI).sqrt();
        for (a, &k) in amps.iter_mut().zip(g.ks()) {
            *a *= Complex64::from_polar(scale, -k * g.x_min());
        }
        Ok(MomentumRep { grid: g, amps })
    }
}

/// Momentum-space amplitudes in FFT wrap-around ordering, normalized so that
/// Σ|ψ̃|²·dk equals Σ|ψ|²·dx (Parseval).
#[derive(Debug, Clone)]
pub struct MomentumRep {
    grid: Grid1D,
    amps: Vec<Complex64>,
}

impl MomentumRep {
    pub fn ks(&self) -> &[f64] {
        self.grid.ks()
    }

    pub fn dk(&self) -> f64 {
        self.grid.dk()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dk()
    }

    /// ⟨ψ̃|f(k)|ψ̃⟩ / ⟨ψ̃|ψ̃⟩.
    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let norm2 = self.norm_sqr();
        if norm2 <= 0.0 {
            return Err(QwvError::ZeroNorm);
        }
        let s: f64 = self
            .amps
            .iter()
            .zip(self.ks())
            .map(|(a, &k)| a.norm_sqr() * f(k))
            .sum();
        Ok(s * self.dk() / norm2)
    }

    /// Inverse of [`WaveFunction::fourier_forward`].
    pub fn fourier_inverse(&self, eng: &mut FftEngine) -> WaveFunction {
        let g = &self.grid;
        let scale = g.dx() / (2.0 * std::f64::consts::PI).sqrt();
        let mut amps: Vec<Complex64> = self
            .amps
            .iter()
            .zip(g.ks())
            .map(|(a, &k)| a * Complex64::from_polar(1.0 / (scale * g.n() as f64), k * g.x_min()))
            .collect();
        eng.raw_inverse(&mut amps, g.n());
        WaveFunction { grid: Grid::One(g.clone()), amps }
    }
}
