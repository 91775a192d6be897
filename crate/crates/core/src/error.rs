use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid immersion: aspect ratio {0:e} is below the immersion threshold")]
    InvalidImmersion(f64),
    #[error("variation path leaves the immersion set at sigma = {0}")]
    InvalidVariation(f64),
    #[error("invalid curve invariants: {0}")]
    InvalidInvariants(&'static str),
    #[error("degenerate axis: R e3 = 0 describes a straight line")]
    DegenerateAxis,
    #[error("matrix is not antisymmetric (defect {0:e})")]
    NotAntisymmetric(f64),
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(&'static str),
    #[error("invalid cutoff: endpoints must differ")]
    InvalidCutoff,
    #[error("grid mismatch: {0}")]
    GridMismatch(&'static str),
    #[error("graph too large: immersion lost at s = {s}, theta = {theta}")]
    GraphTooLarge { s: f64, theta: f64 },
    #[error("no u0 profile: Newton failed at s = {0}")]
    NoU0Profile(f64),
    #[error("internal error: {0}")]
    Internal(&'static str),
    #[error("rejected parameters: {0}")]
    RejectedParameters(String),
}
