use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("generator g{gen} out of range (presentation has {ngens} generators)")]
    GeneratorOutOfRange { gen: usize, ngens: usize },

    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),

    #[error("element has augmentation 0 and is not a unit")]
    NotAUnit,

    #[error("peeling failed to clear coordinate {index}; basis is not weight-adapted")]
    Peeling { index: usize },

    #[error("squaring is not additive on the center: {0}")]
    NonAdditive(String),

    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },

    #[error("catalogue entry {order}#{id}: {message}")]
    Fingerprint { order: usize, id: usize, message: String },

    #[error("unsupported order {0}")]
    UnsupportedOrder(usize),

    #[error("no catalogue entry for group {order}#{id}")]
    UnknownGroup { order: usize, id: usize },

    #[error("brute-force oracle refused: {0}")]
    OracleTooLarge(String),

    #[error("invalid counting parameters: {0}")]
    CountParameters(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
