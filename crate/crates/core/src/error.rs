use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite entry encountered in {context}")]
    NonFinite { context: &'static str },
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is numerically singular (smallest/largest singular value = {ratio:e})")]
    Singular { ratio: f64 },
    #[error("vector ambient {vector} does not match operator ambient {operator}")]
    AmbientMismatch { operator: String, vector: String },
    #[error("operator is not bounded below (margin {margin:e})")]
    NotBoundedBelow { margin: f64 },
    #[error("operator is not concave (max defect {defect:e})")]
    NotConcave { defect: f64 },
    #[error("operator is not pure")]
    NotPure,
    #[error("operator lacks the wandering subspace property")]
    NoWanderingSubspace,
    #[error("1 lies in the spectrum (smallest/largest singular value of M - I = {ratio:e})")]
    OneInSpectrum { ratio: f64 },
    #[error("unsupported operator regime: {0}")]
    UnsupportedRegime(String),
    #[error("point {modulus} lies outside the evaluation disc of radius {radius}")]
    OutsideDisc { modulus: f64, radius: f64 },
    #[error("series tail does not reach tolerance within {cap} terms")]
    TailNotConvergent { cap: usize },
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("Blaschke zero {modulus} is not strictly inside the unit disc")]
    ZeroOnBoundary { modulus: f64 },
    #[error("symbol takes the value 1 at the origin")]
    SymbolSingularAtOrigin,
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("invalid automorphism parameter r = {r} (need 0 <= r < 1)")]
    InvalidAutomorphism { r: f64 },
    #[error("vector is not in the defect space (distance {distance:e})")]
    NotInDefectSpace { distance: f64 },
    #[error("model invariant `{name}` violated (residual {residual:e})")]
    InvariantViolated { name: &'static str, residual: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}
