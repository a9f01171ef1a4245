//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("CFL violation: c = {c} is outside (0, 1/2)")]
    CflViolation { c: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grids do not nest dyadically: coarse n = {coarse_n}, fine n = {fine_n}")]
    NonDyadic { coarse_n: usize, fine_n: usize },

    #[error("CFL constants differ between levels: {coarse_c} vs {fine_c}")]
    CflMismatch { coarse_c: f64, fine_c: f64 },

    #[error("dimension mismatch: field has {found} points, grid expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("time {t} is not on the temporal grid (h = {h})")]
    OffGridTime { t: f64, h: f64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("mode index {j} outside [-{n}, {n} - 1]")]
    ModeOutOfRange { j: i64, n: usize },

    #[error("negative time {0} not allowed")]
    NegativeTime(f64),

    #[error("negative variance {0} not allowed")]
    NegativeVariance(f64),

    #[error("noise horizon {available} too short, need {needed}")]
    NoiseHorizon { needed: f64, available: f64 },

    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),

    #[error("non-finite value produced: {0}")]
    NonFinite(String),

    #[error("unknown drift '{0}'")]
    UnknownDrift(String),

    #[error("unknown initial condition '{0}'")]
    UnknownInitial(String),

    #[error("unsupported schema version {found}, expected {expected}")]
    SchemaVersion { expected: u32, found: u32 },

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("report parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
