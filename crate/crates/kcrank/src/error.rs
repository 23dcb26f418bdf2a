use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error surface for the whole toolkit. Domain-precondition violations map
/// to CLI exit code 2; verification failures are reported, not errored.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(i64),

    #[error("{what}: {a} and {b} must be coprime")]
    NotCoprime { what: &'static str, a: i64, b: i64 },

    #[error("residue a = {a} must satisfy 0 < a < c = {c}")]
    BadResidue { a: i64, c: i64 },

    #[error("c = {c} must divide p = {p} here")]
    ExpectedDivides { c: i64, p: i64 },

    #[error("c = {c} must not divide p = {p} here")]
    ExpectedNotDivides { c: i64, p: i64 },

    #[error("c must be an odd integer >= {min}, got {c}")]
    OddCRequired { c: i64, min: i64 },

    #[error("k = {k} outside supported range {lo}..={hi}")]
    KOutOfRange { k: i64, lo: i64, hi: i64 },

    #[error("unsupported Bessel order 2*nu = {nu2}")]
    BesselOrder { nu2: i64 },

    #[error("argument must be positive: {0}")]
    NonPositiveArgument(String),

    #[error("tau must lie in the upper half-plane, got Im tau = {0}")]
    NotUpperHalfPlane(String),

    #[error("z must lie in the right half-plane, got Re z = {0}")]
    NotRightHalfPlane(String),

    #[error("pole proximity in {what}: |denominator| = {magnitude} is below 2^-{threshold_log2}")]
    PoleProximity {
        what: &'static str,
        magnitude: String,
        threshold_log2: u32,
    },

    #[error("truncation cap {cap} exceeded while {what}")]
    TruncationCap { cap: usize, what: &'static str },

    #[error("precision {prec} below the supported minimum {min}")]
    PrecisionTooLow { prec: u32, min: u32 },

    #[error("hypotheses not satisfied: {0}")]
    Hypotheses(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
