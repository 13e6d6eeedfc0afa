//! Exact moment statistics of elliptic-curve point counts over prime fields.
//!
//! For a one-parameter family `y^2 = x^3 + a2(T) x^2 + a4(T) x + a6(T)` with
//! integer polynomial coefficients, specializing `T = t` and reducing mod an
//! odd prime `p` gives a curve whose point-count deviation is
//! `a_t(p) = p - N_t(p)`. This crate computes the first and second moments of
//! `a_t(p)` over a complete residue system `t mod p`, both by brute force and
//! through a catalog of frozen closed forms, and checks the two against each
//! other. On top of that sit a fluctuation sweep showing the `p^(3/2)` term
//! of the second moment for `y^2 = x^3 + Tx^2 + 1`, a Nagao-style rank
//! estimator, and the numeric side of an average-rank upper bound driven by
//! a sin^2 Fourier test-function pair and prime sums.
//!
//! Everything that can be exact is exact: moments, character sums, and zero
//! counts are 64-bit integers; floating point only enters for Gauss sums,
//! Sato-Tate angles, and the rank-bound analysis.

pub mod curve_counts;
pub mod family_moments;
pub mod legendre_sums;
pub mod modarith;
pub mod primes;
pub mod rank_bounds;
pub mod sharpness;

pub use modarith::{OddPrime, Residue};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not an odd prime in (2, 2^31]")]
    NotOddPrime(u64),
    #[error("division by zero modulo {p}")]
    DivisionByZero { p: u64 },
    #[error("residues have different moduli")]
    MixedModuli,
    #[error("degenerate quadratic: leading coefficient vanishes mod {p}")]
    DegenerateQuadratic { p: u64 },
    #[error("quadratic and linear coefficients both vanish mod {p}")]
    ConstantQuadratic { p: u64 },
    #[error("|{a}| exceeds the Hasse bound 2*sqrt({p})")]
    HasseViolation { a: i64, p: u64 },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("p = {p} exceeds the brute-force budget {max}")]
    BudgetExceeded { p: u64, max: u64 },
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
