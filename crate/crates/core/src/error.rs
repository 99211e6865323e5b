use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for mode {mode} of size {size}")]
    IndexOutOfRange { mode: usize, index: usize, size: usize },

    #[error("expected a {expected}-index multi-index, got {got}")]
    IndexArity { expected: usize, got: usize },

    #[error("flat offset {offset} out of range for {len} elements")]
    OffsetOutOfRange { offset: usize, len: usize },

    #[error("mode {mode} out of range for an order-{order} tensor")]
    ModeOutOfRange { mode: usize, order: usize },

    #[error("mode sizes must be positive, got {dims:?}")]
    ZeroDimension { dims: Vec<usize> },

    #[error("element count of {dims:?} overflows the address space")]
    Overflow { dims: Vec<usize> },

    #[error("allocation of {requested} bytes exceeds the memory cap of {cap} bytes")]
    MemoryCap { requested: u128, cap: u64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("bond {bond} mismatch: left core has {left}, right core has {right}")]
    BondMismatch { bond: usize, left: usize, right: usize },

    #[error("boundary rank at the {side} end must be 1, got {rank}")]
    BoundaryRank { side: &'static str, rank: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("reference evaluation needs {work} multiplies, above the cap of {cap}")]
    WorkCap { work: u128, cap: u128 },

    #[error("malformed {format} data: {reason}")]
    Format { format: &'static str, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
