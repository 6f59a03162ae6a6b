use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph on {0} vertices exceeds the bitset capacity of {max} vertices", max = crate::MAX_VERTICES)]
    Capacity(usize),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("{0}-{1} is not an edge")]
    MissingEdge(usize, usize),

    #[error("vertices {0} and {1} are adjacent")]
    Adjacent(usize, usize),

    #[error("invalid vertex split: {0}")]
    InvalidSplit(String),

    #[error("k must be at least 4 (got {0})")]
    KTooSmall(usize),

    #[error("{what}: size {size} exceeds the configured limit {limit} (raise it via KCRIT_LIMITS)")]
    LimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("empty range: {0}")]
    EmptyRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("two-cut {{{x}, {y}}}: {msg}")]
    TwoCut { x: usize, y: usize, msg: String },

    #[error("recognition step {step}: {msg}")]
    Step { step: u8, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
