use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group closure exceeded the size cap of {cap} elements")]
    SizeLimit { cap: usize },
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("not an exact factorization: {0}")]
    NotExactFactorization(String),
    #[error("factorization failure: {0}")]
    FactorizationFailure(String),
    #[error("invalid matched pair: {0}")]
    InvalidMatchedPair(String),
    #[error("action is not well defined: {0}")]
    ActionNotWellDefined(String),
    #[error("bialgebra has no antipode: {0}")]
    NoAntipode(String),
    #[error("subalgebra is not a normal Hopf subalgebra: {0}")]
    NotNormal(String),
    #[error("algebra is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("numeric degeneracy: {0}")]
    NumericDegeneracy(String),
    #[error("not a character: {0}")]
    NotACharacter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("quotient target is not a group algebra")]
    NotGroupAlgebra,
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidPermutation(_) | Error::SizeLimit { .. } => 2,
            Error::Consistency(_) | Error::TheoremViolation(_) => 4,
            _ => 3,
        }
    }
}
