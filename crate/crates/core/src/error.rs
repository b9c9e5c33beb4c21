use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("face {0:?} is not strictly increasing")]
    FaceNotIncreasing(Vec<usize>),
    #[error("face {face:?} has a vertex outside 0..={dim}")]
    FaceOutOfRange { face: Vec<usize>, dim: usize },
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("k = {k} is out of range for a word of length {len}")]
    SplitOutOfRange { k: usize, len: usize },
    #[error("instance too large: word length {0} exceeds 5")]
    InstanceTooLarge(usize),
    #[error("tail position {position} out of range 1..={leaves}")]
    PositionOutOfRange { position: usize, leaves: usize },
    #[error("simplex {0:?} is not strictly increasing")]
    NonIncreasingSimplex(Vec<usize>),
    #[error("simplex {0:?} refers to an unknown vertex")]
    UnknownVertex(Vec<usize>),
    #[error("duplicate simplex {0:?}")]
    DuplicateSimplex(Vec<usize>),
    #[error("simplex {0:?} is not in the complex")]
    NotInComplex(Vec<usize>),
    #[error("global form is not face compatible at {simplex:?} / {face:?}")]
    Incompatible { simplex: Vec<usize>, face: Vec<usize> },
    #[error("parse error: {0}")]
    Parse(String),
}
