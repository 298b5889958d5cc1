use thiserror::Error;

use crate::tree::Letter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("alphabet size {0} is not in 1..=256")]
    InvalidAlphabet(usize),
    #[error("letter {letter} is outside the alphabet of size {m}")]
    LetterOutOfRange { letter: Letter, m: usize },
    #[error("branch period must be nonempty")]
    EmptyPeriod,
    #[error("incidence of an element with itself is undefined")]
    UndefinedIncidence,
    #[error("incidence needs the extending element first")]
    IncidenceOrientation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("map is not a bijection: {0}")]
    NotBijective(String),
    #[error("pattern size must be positive")]
    EmptyPattern,
    #[error("split double comb needs distinct root letters, got u = v = {0}")]
    SameSplitLetters(Letter),
    #[error("invalid comb generator: {0}")]
    InvalidGenerator(String),
    #[error("branch has only {available} occurrences of letter {letter}, {requested} requested")]
    Exhausted {
        letter: Letter,
        available: usize,
        requested: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("invalid color table: {0}")]
    InvalidTable(String),
    #[error("invalid disjoint family: {0}")]
    InvalidFamily(String),
    #[error("the point at infinity does not exist in K1")]
    InfinityInK1,
    #[error("class index {class} out of range (the space has {classes} classes)")]
    ClassOutOfRange { class: usize, classes: usize },
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("separation needs {expected} points, got {got}")]
    WrongPointCount { expected: usize, got: usize },
    #[error("convergence horizon {horizon} needs {needed} teeth, generator has {available}")]
    GeneratorExhausted {
        horizon: usize,
        needed: usize,
        available: usize,
    },
    #[error("split embedding hypothesis fails: {0}")]
    SplitHypothesis(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("dense types need n >= 2, got {0}")]
    TooSmall(usize),
    #[error("invalid strong-dense-type: {0:?}")]
    Invalid(Vec<String>),
    #[error("color table construction is not total: {0}")]
    NotTotal(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("invalid reduction data: {0}")]
    InvalidData(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("target size n0 = {n0} must satisfy 1 <= n0 < {n1}")]
    TargetOutOfRange { n0: usize, n1: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
