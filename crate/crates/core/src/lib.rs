//! Tools around perfect 2-error-correcting Lee codes.
//!
//! The crate decides, for a given dimension `n`, whether a number-theoretic
//! criterion proves that no perfect 2-error-correcting Lee code exists in
//! `Z^n`, reproduces the associated prime/applicability counts, constructs
//! and verifies the classical Golomb-Welch codes, searches for homomorphism
//! witnesses over `Z/pZ`, and checks the power-sum algebra those witnesses
//! must satisfy.
//!
//! Modules:
//! - [`modular`]: exact 64-bit modular arithmetic, deterministic primality,
//!   factorization, multiplicative orders, subgroup discrete logs.
//! - [`criterion`]: the nonexistence criterion for a single `n` and the
//!   batch scan producing aggregate counts.
//! - [`lee`]: Lee metric geometry and Lee sphere enumeration.
//! - [`codes`]: code representations, tiling verification, lift/projection,
//!   and the Golomb-Welch constructions.
//! - [`witness`]: symmetry-reduced exhaustive search for bijective
//!   homomorphism witnesses.
//! - [`symfun`]: power sums, the master identity, Newton's identities and
//!   the lemma-chain instance checks over `Z/pZ`.

pub mod codes;
pub mod criterion;
pub mod lee;
pub mod modular;
pub mod symfun;
pub mod witness;

/// Error type shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("residue is zero modulo {0}; multiplicative order undefined")]
    ZeroResidue(u64),
    #[error("n must be at least 1")]
    NOutOfRange,
    #[error("p = {p} = 2n^2+2n+1 is not prime for n = {n}")]
    CompositeModulus { n: u64, p: u64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("q = {q} is below 2e+1 = {min} (projection not injective)")]
    ModulusTooSmall { q: u64, min: u64 },
    #[error("torus has {size} points, exceeding the verification guard of {guard}")]
    VerificationTooLarge { size: u128, guard: u64 },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
