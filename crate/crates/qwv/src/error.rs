use thiserror::Error;

pub type Result<T> = std::result::Result<T, QwvError>;

/// Error taxonomy for the simulator.
///
/// `Config`/`Structural` map to CLI exit code 1, the numeric variants to
/// exit code 2.
#[derive(Debug, Error)]
pub enum QwvError {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("expectation value undefined: state has zero norm")]
    ZeroNorm,

    #[error("numeric blow-up at t = {t} a.u. (last good t = {last_good}): {detail}")]
    NumericBlowup { t: f64, last_good: f64, detail: String },

    #[error("diagonalization failed: {0}")]
    Diagonalization(String),

    #[error("degenerate pair: splitting {splitting} hartree is too small for a finite tunneling time")]
    DegeneratePair { splitting: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("tilt too weak: {detail}; try a larger |e_dc|")]
    TiltTooWeak { detail: String },

    #[error("forbidden transition: dipole matrix element is zero")]
    ForbiddenTransition,

    #[error("schedule error: {0}")]
    Schedule(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("corrupt file {path} at byte offset {offset}: {detail}")]
    CorruptFile { path: String, offset: u64, detail: String },

    #[error("phase continuity repair failed at R values {0:?}")]
    PhaseContinuity(Vec<f64>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl QwvError {
    /// CLI exit status: 1 for usage/config problems, 2 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            QwvError::Config(_)
            | QwvError::Structural(_)
            | QwvError::GridMismatch(_)
            | QwvError::Io(_)
            | QwvError::CorruptFile { .. } => 1,
            _ => 2,
        }
    }
}
