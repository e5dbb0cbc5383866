//! Uniform spatial grids with conjugate momentum grids.
//!
//! Momentum grids use the standard FFT wrap-around ordering
//! `k[j] = 2π j / (n dx)` for `j < n/2` and `k[j] = 2π (j - n) / (n dx)`
//! otherwise. Every k-grid in the crate comes from here.

use crate::error::{QwvError, Result};

/// Uniform 1D grid over `[x_min, x_max)` with `n` points, `n` a power of two.
///
/// The right endpoint is excluded: the grid is periodic under the spectral
/// representation, so `x_max` is the image of `x_min`.
#[derive(Debug, Clone)]
pub struct Grid1D {
    n: usize,
    x_min: f64,
    x_max: f64,
    dx: f64,
    xs: Vec<f64>,
    ks: Vec<f64>,
}

impl Grid1D {
    pub fn new(n: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(QwvError::Structural(format!(
                "grid size {n} must be a power of two >= 2"
            )));
        }
        if !(x_max > x_min) {
            return Err(QwvError::Structural(format!(
                "grid bounds [{x_min}, {x_max}] must be increasing"
            )));
        }
        let dx = (x_max - x_min) / n as f64;
        let xs = (0..n).map(|j| x_min + j as f64 * dx).collect();
        let dk = 2.0 * std::f64::consts::PI / (n as f64 * dx);
        let ks = (0..n)
            .map(|j| {
                let j = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
                j as f64 * dk
            })
            .collect();
        Ok(Self { n, x_min, x_max, dx, xs, ks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// k-grid spacing 2π/(n·dx).
    pub fn dk(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.n as f64 * self.dx)
    }

    pub fn x(&self, j: usize) -> f64 {
        self.xs[j]
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    /// Momentum grid in FFT wrap-around ordering.
    pub fn ks(&self) -> &[f64] {
        &self.ks
    }

    /// Evaluate a function on every grid point.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.xs.iter().map(|&x| f(x)).collect()
    }

    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.n == other.n && self.x_min == other.x_min && self.x_max == other.x_max
    }
}

/// Electron coordinate `z` crossed with internuclear coordinate `R > 0`.
///
/// Amplitude layout is row-major with R as the slow index:
/// `index(ir, iz) = ir * n_z + iz`.
#[derive(Debug, Clone)]
pub struct Grid2D {
    pub z: Grid1D,
    pub r: Grid1D,
}

impl Grid2D {
    pub fn new(z: Grid1D, r: Grid1D) -> Result<Self> {
        if r.x_min() <= 0.0 {
            return Err(QwvError::Structural(format!(
                "internuclear grid must cover only R > 0 (got r_min = {})",
                r.x_min()
            )));
        }
        Ok(Self { z, r })
    }

    pub fn len(&self) -> usize {
        self.z.n() * self.r.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, ir: usize, iz: usize) -> usize {
        ir * self.z.n() + iz
    }

    pub fn same_as(&self, other: &Grid2D) -> bool {
        self.z.same_as(&other.z) && self.r.same_as(&other.r)
    }
}

/// The grid a wavefunction lives on.
#[derive(Debug, Clone)]
pub enum Grid {
    One(Grid1D),
    Two(Grid2D),
}

impl Grid {
    pub fn cell_volume(&self) -> f64 {
        match self {
            Grid::One(g) => g.dx(),
            Grid::Two(g) => g.z.dx() * g.r.dx(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::One(g) => g.n(),
            Grid::Two(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        match (self, other) {
            (Grid::One(a), Grid::One(b)) => a.same_as(b),
            (Grid::Two(a), Grid::Two(b)) => a.same_as(b),
            _ => false,
        }
    }

    pub fn as_1d(&self) -> Result<&Grid1D> {
        match self {
            Grid::One(g) => Ok(g),
            Grid::Two(_) => Err(QwvError::GridMismatch("expected a 1D grid".into())),
        }
    }

    pub fn as_2d(&self) -> Result<&Grid2D> {
        match self {
            Grid::Two(g) => Ok(g),
            Grid::One(_) => Err(QwvError::GridMismatch("expected a 2D grid".into())),
        }
    }
}
