use num_bigint::BigInt;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(BigInt),

    #[error("prime candidate {0} exceeds the supported 64-bit range")]
    PrimeTooLarge(BigInt),

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("polynomials live over different moduli")]
    ModulusMismatch,

    #[error("expected a monic polynomial")]
    NonMonic,

    #[error("enumeration budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("scan exhausted: {0}")]
    ScanExhausted(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
