use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension m = {0} is outside 1..=12")]
    InvalidDimension(usize),
    #[error("m must be even, got {0}")]
    OddDimension(usize),
    #[error("operation requires m = 2, got m = {0}")]
    RequiresPlane(usize),
    #[error("basis index {index} out of range 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("grade {k} out of range 0..={m}")]
    GradeOutOfRange { k: usize, m: usize },
    #[error("invalid blade name {0:?}")]
    InvalidBlade(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("operation requires a {0} grid")]
    WrongGridKind(&'static str),
    #[error("radial table does not cover [0, {radius}]")]
    RadialTableCoverage { radius: f64 },
    #[error("point at distance {distance} lies outside the source domain")]
    Extrapolation { distance: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Bessel series did not reach tolerance {tolerance:e} within order {order}")]
    SeriesTruncation { order: usize, tolerance: f64 },
    #[error("translated support {needed} exceeds truncation radius {radius}")]
    SupportViolation { needed: f64, radius: f64 },
    #[error("function is not radial")]
    NotRadial,
    #[error("too few usable nodes: {found} < {needed}")]
    TooFewNodes { found: usize, needed: usize },
    #[error("least-squares system is ill-conditioned")]
    IllConditioned,
    #[error("angular resolution {0} too small")]
    AngularResolution(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
