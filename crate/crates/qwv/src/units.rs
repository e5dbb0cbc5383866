//! Hartree atomic units and the few conversions used at I/O boundaries.

/// One atomic unit of time in femtoseconds.
pub const AU_TIME_FS: f64 = 0.02418884;

/// One hartree in electronvolts.
pub const HARTREE_EV: f64 = 27.2114;

/// Proton mass in atomic units (electron masses).
pub const PROTON_MASS: f64 = 1836.15267;

pub fn au_to_fs(t: f64) -> f64 {
    t * AU_TIME_FS
}

pub fn fs_to_au(t: f64) -> f64 {
    t / AU_TIME_FS
}

pub fn hartree_to_ev(e: f64) -> f64 {
    e * HARTREE_EV
}

pub fn ev_to_hartree(e: f64) -> f64 {
    e / HARTREE_EV
}
