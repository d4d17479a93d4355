use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid radix sequence: {0}")]
    InvalidRadix(String),

    #[error("digit {digit} at position {position} is out of range for radix {radix}")]
    DigitOutOfRange { position: usize, digit: u32, radix: u32 },

    #[error("spectral index must be non-negative, got {0}")]
    NegativeIndex(String),

    #[error("cannot parse `{0}` as a decimal integer")]
    ParseIndex(String),

    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("{what} = {value} exceeds the summation guard {limit}")]
    SummationGuard { what: &'static str, value: String, limit: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exponent p must be >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("index set is empty")]
    EmptyIndexSet,

    #[error("null set has no points")]
    EmptyNullSet,

    #[error("support set of a flat polynomial is empty")]
    EmptySupport,

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("exponent chain violated at stage {stage}: {detail}")]
    ChainViolation { stage: usize, detail: String },

    #[error("spectral windows collide: {0}")]
    WindowCollision(String),

    #[error("stage {stage} out of range 1..={max}")]
    StageOutOfRange { stage: usize, max: usize },

    #[error("point is not a member of the null set")]
    PointNotInSet,

    #[error("divergence certificate failed at stage {stage}, point {point}: {detail}")]
    CertificateFailed { stage: usize, point: usize, detail: String },

    #[error("{step} step failed")]
    Pipeline {
        step: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn in_step(step: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Pipeline { step, source: Box::new(source) }
    }
}
