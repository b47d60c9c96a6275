//! Decides whether the product (1^l + q^l)(2^l + q^l) ... (n^l + q^l) is a
//! powerful number, producing independently checkable witness certificates
//! and cross-validating them against a brute-force factorization oracle.

pub mod congruence;
pub mod error;
pub mod oracle;
pub mod primes;
pub mod valuation;
pub mod witness;

pub use error::{Error, Result};
pub use oracle::{is_powerful, FactorMap};
pub use valuation::{Instance, TermValuation, Via};
pub use witness::{Certificate, CheckConfig, Strategy, Verdict};
