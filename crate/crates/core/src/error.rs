use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("continued fraction of alpha terminates after {depth} terms (rational input)")]
    RationalInput { depth: usize },

    #[error("no n <= {n_max} has ||n alpha|| in the band for r = {r}")]
    BandUnreachable { r: u64, n_max: u64 },

    #[error("eps must lie in (0, 1/4), got {0}")]
    InvalidEps(f64),

    #[error("could not parse circle point {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("series is not conjugate symmetric at frequency {0}")]
    NotConjugateSymmetric(i64),

    #[error("frequency {0} appears twice")]
    DuplicateFrequency(i64),

    #[error("|e(n alpha) - 1| = {value:e} at n = {n} is below working precision")]
    DivisorUnderflow { n: i64, value: f64 },

    #[error("chain length must be at least 1")]
    EmptyChain,

    #[error("truncation {requested} exceeds the {available} available subsequence entries")]
    TruncationTooLong { requested: usize, available: usize },

    #[error("truncations must be strictly increasing")]
    NonIncreasing,

    #[error("index out of range: {0}")]
    BadIndex(String),

    #[error("malformed skew product: {0}")]
    MalformedSpec(String),

    #[error("base spec has no series coordinate")]
    NoSeriesCoordinate,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("time-change value {0} is negative")]
    NegativeTimeChange(i64),

    #[error("probe needs at least two starting points")]
    TooFewStarts,

    #[error("complexity guard: {0}")]
    ComplexityGuard(String),

    #[error("invalid finite system: {0}")]
    InvalidFiniteSystem(String),

    #[error("certificate is not for an interleaved product system")]
    NotAProduct,

    #[error("certificate failed re-validation: {0}")]
    InvalidCertificate(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
