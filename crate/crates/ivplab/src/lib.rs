//! Exact computation in `Int(ℤ)`, the ring of integer-valued polynomials.
//!
//! The crate constructs, for a given `N ≥ 2` and prime `p`, an irreducible
//! element `F = (f_1 ⋯ f_q) / p^{N−1}` of `Int(ℤ)` whose powers `F^n` factor
//! uniquely for every `n < N` while `F^N` has exactly two essentially
//! different factorizations, one of length 2 and one of length `N`.  All
//! arithmetic is exact (arbitrary-precision integers), every claimed property
//! is re-verified by computation, and an independent brute-force oracle
//! cross-checks the factorization enumeration.
//!
//! Modules:
//! - [`poly`]: dense univariate polynomials over ℤ.
//! - [`padic`]: p-adic valuations and fixed divisors.
//! - [`ffpoly`]: arithmetic mod p and irreducibility certificates over ℚ.
//! - [`construct`]: the witness construction (residues, `g_i`, `f_i`, `F`).
//! - [`engine`]: canonical `Int(ℤ)` elements and exhaustive factorization
//!   enumeration in the monadic submonoid generated by `F`.
//! - [`oracle`]: independent brute-force cross-checks.
//! - [`json`]: the JSON wire formats (witness files, element files, reports).

pub mod construct;
pub mod engine;
pub mod error;
pub mod ffpoly;
pub mod json;
pub mod oracle;
pub mod padic;
pub mod poly;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
