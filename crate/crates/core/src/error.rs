use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at s = 1 for the principal character mod {modulus}")]
    Pole { modulus: u64 },
    #[error("accuracy unattainable: {0}")]
    AccuracyUnattainable(String),
    #[error("character mod {modulus} is imprimitive (conductor {conductor})")]
    Imprimitive { modulus: u64, conductor: u64 },
    #[error("operation requires a nontrivial character")]
    TrivialCharacter,
    #[error("{count} characters exceed the enumeration cap {cap}")]
    EnumerationOverflow { count: u64, cap: u64 },
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("argument {x} beyond the cached range {max}")]
    Range { x: f64, max: f64 },
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("no hit below the search cap {cap}")]
    SearchCap { cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
