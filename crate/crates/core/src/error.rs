use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("p-adic valuation of 0 is undefined")]
    ZeroValuation,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("lifting-the-exponent hypothesis violated: {0}")]
    LtePrecondition(&'static str),

    #[error("{0} is not an odd prime power")]
    NotPrimePower(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// A guarantee the underlying theorems make was observed to fail.
    /// This indicates an implementation bug, never a mathematical fact.
    #[error("integrity failure: {0}")]
    Integrity(String),

    #[error("bit budget exceeded: value has {bits} bits, budget is {budget} bits")]
    BudgetExceeded { bits: u64, budget: u64 },

    #[error("term a={a} exceeds the bit budget: {bits} bits > {budget} bits")]
    TermBudgetExceeded { a: u64, bits: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
