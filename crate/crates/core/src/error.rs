use thiserror::Error;

/// Failures shared by every construction in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown object id {0}")]
    UnknownObject(usize),
    #[error("unknown morphism id {0}")]
    UnknownMorphism(usize),
    #[error("presheaves live over different base categories")]
    BaseMismatch,
    #[error("slice objects have different bases")]
    SliceMismatch,
    #[error("invalid data: {0}")]
    Invalid(String),
    #[error("search budget of {budget} nodes exceeded while {context}")]
    Bounds { budget: u64, context: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no lift exists: {0}")]
    NoLift(String),
    #[error("fiber of size {size} over ({object}, {element}) is not smaller than kappa = {kappa}")]
    Smallness {
        object: usize,
        element: usize,
        size: usize,
        kappa: usize,
    },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_bounds(&self) -> bool {
        matches!(self, Error::Bounds { .. })
    }
}
