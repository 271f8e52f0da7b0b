use alloc::string::String;

use crate::coeffgroup::Group;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Broad failure category, used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-range input.
    Input,
    /// A chain or measure invariant does not hold.
    Invariant,
    /// A slicing plane is not transverse; a perturbed retry usually succeeds.
    Transversality,
    /// The request is valid but outside what is implemented.
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("coefficient groups differ: {left} vs {right}")]
    GroupMismatch { left: Group, right: Group },
    #[error("invalid group descriptor: {0}")]
    InvalidGroup(String),
    #[error("value is not an element of {group}: {reason}")]
    InvalidElement { group: Group, reason: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("term {term}: simplex is degenerate")]
    DegenerateSimplex { term: usize },
    #[error("term {term}: {reason}")]
    InvalidSimplex { term: usize, reason: String },
    #[error("terms {first} and {second} overlap in their interiors")]
    Overlap { first: usize, second: usize },
    #[error("term {term} is not transverse to the slicing plane")]
    NotTransverse { term: usize },
    #[error("invalid plane: {0}")]
    InvalidPlane(String),
    #[error("measure is only resolved to level {resolved}, level {requested} requested")]
    LevelBeyondResolution { resolved: u32, requested: u32 },
    #[error("sample parameters must be strictly increasing (index {index})")]
    NonMonotone { index: usize },
    #[error("boundary identity fails: {0}")]
    BoundaryMismatch(String),
    #[error("weight is undefined at coefficient {0}")]
    WeightUndefined(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::GroupMismatch { .. }
            | Error::DimensionMismatch { .. }
            | Error::DegenerateSimplex { .. }
            | Error::Overlap { .. }
            | Error::BoundaryMismatch(_) => ErrorKind::Invariant,
            Error::NotTransverse { .. } => ErrorKind::Transversality,
            Error::Unsupported(_) | Error::WeightUndefined(_) => ErrorKind::Unsupported,
            Error::InvalidGroup(_)
            | Error::InvalidElement { .. }
            | Error::InvalidSimplex { .. }
            | Error::InvalidPlane(_)
            | Error::LevelBeyondResolution { .. }
            | Error::NonMonotone { .. }
            | Error::InvalidArgument(_) => ErrorKind::Input,
        }
    }
}
