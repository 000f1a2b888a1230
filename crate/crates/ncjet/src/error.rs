use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension {dim} exceeds the configured cap {cap} (set NCJET_MAX_DIM to raise it)")]
    DimensionCap { dim: usize, cap: usize },
    #[error("form degree {requested} requested but the calculus is built to degree {max}")]
    DegreeOverflow { requested: usize, max: usize },
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("map is not well defined: {0}")]
    IllDefined(String),
    #[error("jet sequence is not exact at order {0}")]
    NotExact(usize),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no solution: {0}")]
    Unsolvable(String),
    #[error("lift at order {0} is not unique (elemental jets are a proper subspace)")]
    NonUniqueLift(usize),
    #[error("the deformation parameter must be nonzero")]
    ZeroHbar,
    #[error("negative power of h outside the deformed total symbol")]
    NegativePower,
    #[error("check failed: {0}")]
    Check(String),
}

pub type Result<T> = std::result::Result<T, Error>;
