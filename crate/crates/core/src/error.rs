use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("signed product is not a polynomial (remainder after dividing by x^{0}-1)")]
    NotPolynomial(u64),
    #[error("root {root} is off the unit circle by {distance:e}")]
    RootOffCircle { root: String, distance: f64 },
    #[error("{kappa} is not a root of multiplicity >= {needed}")]
    MultiplicityTooLow { kappa: String, needed: usize },
    #[error("not in the family: {0}")]
    NotInFamily(String),
    #[error("group is not an arithmetic progression with step 1: {0}")]
    NotArithmeticGroup(String),
    #[error("spectral pairs do not decompose into ladders; witness {witness}")]
    NotLadderComposed { witness: String },
    #[error("matrix is singular")]
    Singular,
    #[error("unclassified: {0}")]
    Unclassified(String),
    #[error("degenerate flag at index {0}")]
    DegenerateFlag(usize),
    #[error("bad exponents: {0}")]
    BadExponents(String),
    #[error("reduction required for exponents {0:?}")]
    ReductionRequired(Vec<i64>),
    #[error("no reduction applies to exponents {0:?}")]
    NotReducible(Vec<i64>),
    #[error("chain graph broken at {0}")]
    ChainBroken(String),
    #[error("|a| > 2: {0}")]
    OutOfT(String),
    #[error("out of family: {0}")]
    OutOfFamily(String),
    #[error("eigenvalue collision inside the simplex at r = {r}")]
    CollisionInsideSimplex { r: f64 },
    #[error("path leaves T(n,R) at r = {r}")]
    LeftT { r: f64 },
    #[error("phase violation for kappa {kappa}: got {got}, expected {expected}")]
    PhaseViolation { kappa: String, got: f64, expected: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integer overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Variant name, used as the machine readable error tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPolynomial(_) => "NotPolynomial",
            Error::RootOffCircle { .. } => "RootOffCircle",
            Error::MultiplicityTooLow { .. } => "MultiplicityTooLow",
            Error::NotInFamily(_) => "NotInFamily",
            Error::NotArithmeticGroup(_) => "NotArithmeticGroup",
            Error::NotLadderComposed { .. } => "NotLadderComposed",
            Error::Singular => "Singular",
            Error::Unclassified(_) => "Unclassified",
            Error::DegenerateFlag(_) => "DegenerateFlag",
            Error::BadExponents(_) => "BadExponents",
            Error::ReductionRequired(_) => "ReductionRequired",
            Error::NotReducible(_) => "NotReducible",
            Error::ChainBroken(_) => "ChainBroken",
            Error::OutOfT(_) => "OutOfT",
            Error::OutOfFamily(_) => "OutOfFamily",
            Error::CollisionInsideSimplex { .. } => "CollisionInsideSimplex",
            Error::LeftT { .. } => "LeftT",
            Error::PhaseViolation { .. } => "PhaseViolation",
            Error::Dimension(_) => "Dimension",
            Error::Overflow => "Overflow",
            Error::Parse(_) => "Parse",
            Error::Invalid(_) => "Invalid",
        }
    }
}
