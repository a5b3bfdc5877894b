use thiserror::Error;

/// Errors raised by the arithmetic, matrix and sail machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid denominator: r must be nonzero")]
    InvalidDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not squarefree")]
    SquarefreeViolation,
    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("rational input has a finite continued fraction")]
    RationalInput,
    #[error("quadratic surds live in different fields (D = {0} vs D = {1})")]
    FieldMismatch(String, String),
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("degenerate angle: points are collinear")]
    DegenerateAngle,
    #[error("sequence too short: need at least {needed}, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("search bound {bound} exhausted")]
    BoundExhausted { bound: u64 },
    #[error("region too small; retry with radius >= {suggested_radius}")]
    RegionTooSmall { suggested_radius: u64 },
    #[error("radius {0} is below the minimum of 2")]
    RadiusTooSmall(u64),
    #[error("radius {radius} exceeds the safety cap {cap}")]
    RadiusCap { radius: u64, cap: u64 },
    #[error("spectrum class mismatch: {0}")]
    SpectrumMismatch(String),
    #[error("empty window: no lattice points found")]
    EmptyWindow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
