use thiserror::Error;

/// Typed domain errors. Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has no known terms below its truncation; cannot invert")]
    NotAUnit,
    #[error("integral residue {0}: Gamma ratio undefined")]
    IntegerResidue(String),
    #[error("invalid ramified data: {0}")]
    InvalidRamifiedData(String),
    #[error("unsupported ramification: {0}")]
    UnsupportedRamification(String),
    #[error("inconsistent rank: {0}")]
    InconsistentRank(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("resonance: {0}")]
    Resonance(String),
    #[error("no annihilating relation of order <= {0}")]
    NoRelationFound(usize),
    #[error("irregular component; only bookkeeping is available: {0}")]
    UseBookkeeping(String),
    #[error("wrong slope sector: {0}")]
    WrongSlopeSector(String),
    #[error("lambda {0} is an integer")]
    IntegralLambda(String),
    #[error("regular connection has no fractional-power symbol")]
    RegularConnection,
    #[error("power table too shallow: {0}")]
    InsufficientDepth(String),
    #[error("formal type has no singular points")]
    NoSingularities,
    #[error("inconsistent formal type: {0}")]
    InconsistentType(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable variant name, for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotAUnit => "NotAUnit",
            Error::IntegerResidue(_) => "IntegerResidue",
            Error::InvalidRamifiedData(_) => "InvalidRamifiedData",
            Error::UnsupportedRamification(_) => "UnsupportedRamification",
            Error::InconsistentRank(_) => "InconsistentRank",
            Error::InsufficientPrecision(_) => "InsufficientPrecision",
            Error::Resonance(_) => "Resonance",
            Error::NoRelationFound(_) => "NoRelationFound",
            Error::UseBookkeeping(_) => "UseBookkeeping",
            Error::WrongSlopeSector(_) => "WrongSlopeSector",
            Error::IntegralLambda(_) => "IntegralLambda",
            Error::RegularConnection => "RegularConnection",
            Error::InsufficientDepth(_) => "InsufficientDepth",
            Error::NoSingularities => "NoSingularities",
            Error::InconsistentType(_) => "InconsistentType",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
