use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not a unit")]
    NotAUnit,
    #[error("invalid Galois index {0}")]
    InvalidIndex(i64),
    #[error("argument outside the domain of {0}")]
    DomainError(&'static str),
    #[error("no eigenvector found for exponent {0}")]
    EigenvectorNotFound(u32),
    #[error("precision exhausted: need {needed} digits, have {available}")]
    PrecisionExhausted { needed: u32, available: u32 },
    #[error("enumeration of {size} points exceeds budget {budget}")]
    EnumerationBudget { size: u64, budget: u64 },
    #[error("element does not stabilize the class")]
    NotInStabilizer,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("lattice model violation: {0}")]
    ModelViolation(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

pub type Result<T> = std::result::Result<T, Error>;
