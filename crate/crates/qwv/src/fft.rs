//! FFT plumbing shared by the propagator and the Fourier-space utilities.
//!
//! `FftEngine` wraps a cached rustfft planner. The `raw_*` variants are
//! unnormalized (forward · inverse = n·identity) so the propagator can fold
//! the 1/n factor into its precomputed kinetic phase; the plain variants
//! are unitary.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct FftEngine {
    planner: FftPlanner<f64>,
    scratch: Vec<Complex64>,
    transpose_buf: Vec<Complex64>,
}

impl Default for FftEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl FftEngine {
    pub fn new() -> Self {
        Self {
            planner: FftPlanner::new(),
            scratch: Vec::new(),
            transpose_buf: Vec::new(),
        }
    }

    fn run(&mut self, plan: Arc<dyn Fft<f64>>, data: &mut [Complex64]) {
        let need = plan.get_inplace_scratch_len();
        if self.scratch.len() < need {
            self.scratch.resize(need, Complex64::ZERO);
        }
        plan.process_with_scratch(data, &mut self.scratch[..need]);
    }

    /// Unnormalized forward DFT of every contiguous row of length `len`.
    pub fn raw_forward(&mut self, data: &mut [Complex64], len: usize) {
        debug_assert_eq!(data.len() % len, 0);
        let plan = self.planner.plan_fft_forward(len);
        for row in data.chunks_exact_mut(len) {
            self.run(plan.clone(), row);
        }
    }

    /// Unnormalized inverse DFT of every contiguous row of length `len`.
    pub fn raw_inverse(&mut self, data: &mut [Complex64], len: usize) {
        debug_assert_eq!(data.len() % len, 0);
        let plan = self.planner.plan_fft_inverse(len);
        for row in data.chunks_exact_mut(len) {
            self.run(plan.clone(), row);
        }
    }

    /// Unitary forward transform (single row).
    pub fn forward(&mut self, data: &mut [Complex64]) {
        let n = data.len();
        self.raw_forward(data, n);
        let s = 1.0 / (n as f64).sqrt();
        for v in data.iter_mut() {
            *v *= s;
        }
    }

    /// Unitary inverse transform (single row).
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        let n = data.len();
        self.raw_inverse(data, n);
        let s = 1.0 / (n as f64).sqrt();
        for v in data.iter_mut() {
            *v *= s;
        }
    }

    /// Unnormalized forward DFT along both axes of an `nr x nz` row-major array.
    pub fn raw_forward_2d(&mut self, data: &mut [Complex64], nr: usize, nz: usize) {
        self.raw_forward(data, nz);
        self.transposed(data, nr, nz, |eng, t| eng.raw_forward(t, nr));
    }

    /// Unnormalized inverse DFT along both axes of an `nr x nz` row-major array.
    pub fn raw_inverse_2d(&mut self, data: &mut [Complex64], nr: usize, nz: usize) {
        self.raw_inverse(data, nz);
        self.transposed(data, nr, nz, |eng, t| eng.raw_inverse(t, nr));
    }

    /// Run `f` on the transposed array (nz rows of length nr), then
    /// transpose back.
    fn transposed(
        &mut self,
        data: &mut [Complex64],
        nr: usize,
        nz: usize,
        f: impl FnOnce(&mut Self, &mut [Complex64]),
    ) {
        let total = nr * nz;
        if self.transpose_buf.len() < total {
            self.transpose_buf.resize(total, Complex64::ZERO);
        }
        let mut buf = std::mem::take(&mut self.transpose_buf);
        transpose(data, &mut buf[..total], nr, nz);
        f(self, &mut buf[..total]);
        transpose(&buf[..total], data, nz, nr);
        self.transpose_buf = buf;
    }
}

/// Transpose `src` (rows x cols, row-major) into `dst` (cols x rows).
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    // blocked for cache friendliness on the larger grids
    const B: usize = 32;
    for ib in (0..rows).step_by(B) {
        for jb in (0..cols).step_by(B) {
            for i in ib..(ib + B).min(rows) {
                for j in jb..(jb + B).min(cols) {
                    dst[j * rows + i] = src[i * cols + j];
                }
            }
        }
    }
}
