use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse word: {0}")]
    WordParse(String),

    #[error("the identity is never a member of V_Phi")]
    IdentityInVPhi,

    #[error("certificate translates differ: {0} vs {1}")]
    TranslateMismatch(String, String),

    #[error("certificate dilation {0} is not even; squaring needs a doubled family")]
    OddDilation(u64),

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("malformed group table: {0}")]
    MalformedTable(String),

    #[error("basis depth {depth} exceeded (needed index {needed})")]
    DepthExceeded { depth: usize, needed: u64 },

    #[error("oracle bound failed a sampled check: {0}")]
    OracleUnsound(String),

    #[error("point is not in the sample set")]
    UnknownPoint,

    #[error("piecewise maps live on different sample sets")]
    SampleMismatch,

    #[error("word letter {letter} references coordinate beyond dimension {dim}")]
    CoordinateOutOfRange { letter: u64, dim: usize },

    #[error("b = {0} is not in V")]
    BNotInV(String),

    #[error("in-line verification failed: {0}")]
    VerificationFailed(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
