use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{name} must be finite and > 0, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("D_T={diffusivity} is inconsistent with lambda/(c*rho)={implied}")]
    InconsistentDiffusivity { diffusivity: f64, implied: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimilarityError {
    #[error("slope |f'|={fp:e} at z={z} is below the singularity guard")]
    DegenerateSlope { z: f64, fp: f64 },
    #[error("boundary slope C must be nonzero")]
    InvalidBoundary,
    #[error("z_max must be finite and > 0, got {0}")]
    InvalidRange(f64),
    #[error("adaptive step collapsed to {h:e} at z={z} (f={f}, f'={fp:e})")]
    StepSizeCollapse { z: f64, h: f64, f: f64, fp: f64 },
    #[error("profile stays positive up to z={z_end}; no front found")]
    NoFront { z_end: f64 },
    #[error("time must be >= 0, got {0}")]
    NegativeTime(f64),
    #[error("time must be > 0, got {0}")]
    NonpositiveTime(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("dt={dt:e} exceeds the stability limit {limit:e}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("non-finite value at node {node} (t={t})")]
    NonFiniteState { node: usize, t: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid time request: {0}")]
    InvalidTimes(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("pulled-back point (t={t}, x={x}) lies outside the solved window")]
    WindowExceeded { t: f64, x: f64 },
    #[error("no snapshot at t={0}")]
    MissingSnapshot(f64),
    #[error("invalid residual window: {0}")]
    InvalidWindow(String),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
}
