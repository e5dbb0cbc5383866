//! Spectral simulator for laser-controlled electron transfer between two
//! separated protons on soft-core Coulomb potentials.
//!
//! The library is organized around a split-operator TDSE engine
//! ([`propagator`]) running on uniform FFT grids ([`grid`]), with bound
//! states from a Fourier Grid Hamiltonian solver ([`eigensolver`]),
//! driving fields behind a common [`control::FieldSource`] trait
//! (analytic sin² pulse sequences, a closed-loop local-control law, or a
//! recorded-field replay), the full observable suite in [`analysis`], and
//! end-to-end scenario/sweep drivers in [`experiments`].
//!
//! All internal quantities are in Hartree atomic units; fs/eV conversions
//! happen only at I/O boundaries (see [`units`]).

pub mod analysis;
pub mod cli;
pub mod control;
pub mod eigensolver;
pub mod error;
pub mod experiments;
pub mod fft;
pub mod grid;
pub mod io;
pub mod potentials;
pub mod propagator;
pub mod units;
pub mod wavefunction;

pub use error::{QwvError, Result};
pub use grid::{Grid, Grid1D, Grid2D};
pub use wavefunction::WaveFunction;
