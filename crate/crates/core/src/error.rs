use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Objects from different rings, wrong vector lengths and similar mix-ups.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("invalid term order: {0}")]
    InvalidOrder(String),

    #[error("polynomial is not multihomogeneous: {0}")]
    NotHomogeneous(String),

    #[error("requires squarefree monomial ideal")]
    RequiresSquarefree,

    #[error("requires monomial ideal")]
    RequiresMonomial,

    #[error("ring too small to polarize: block {block} needs {needed} free variables, has {available}")]
    RingTooSmallToPolarize {
        block: usize,
        needed: usize,
        available: usize,
    },

    #[error("ideal is not strongly stable")]
    NotStronglyStable,

    #[error("resource guard exceeded: {0}")]
    ResourceLimit(String),

    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Two routes that theory says must agree did not. Always an engine bug.
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("semantic error at {line}:{col}: {msg} (near `{token}`)")]
    Semantic {
        line: usize,
        col: usize,
        msg: String,
        token: String,
    },
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
}
