//! Exact moment sequences and certified monotonicity thresholds for the
//! two-parameter family `h_alpha(z) = (1 + 1/z)^(alpha z)`.
//!
//! The crate is organised in two layers:
//!
//! * an exact layer (`rat`, `poly`, `roots`, `moments`) working over
//!   arbitrary-precision rationals: moment recursions, rational polynomial
//!   arithmetic, and Sturm-chain root isolation, all with no rounding at any
//!   point;
//! * a rigorous numerical layer (`real`, `quad`, `funcs`) built on
//!   arbitrary-precision floats that carry explicit error bounds through
//!   every operation, plus double-exponential quadrature for the integral
//!   representations.
//!
//! `certify` combines both layers into machine-checkable certificates: range
//! certificates for moment inequalities, polynomial positivity certificates,
//! an exact-rational bracket for the threshold where `x -> h_alpha(x)` stops
//! being a Bernstein function, and a sign-scan estimate of the larger
//! threshold where hyperbolic complete monotonicity fails.

pub mod rat;
pub mod poly;
pub mod roots;
pub mod moments;
pub mod real;
pub mod quad;
pub mod funcs;
pub mod certify;

use thiserror::Error;

/// Unified error type for fallible operations across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation
    /// (e.g. a non-positive evaluation point for a function defined on
    /// `(0, infinity)`).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input that could not be parsed or validated.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The requested accuracy could not be reached within the internal
    /// precision / refinement limits.
    #[error("precision target not reached: {0}")]
    Precision(String),

    /// A search procedure (bracketing, bisection, scan) failed to locate
    /// the object it was asked for.
    #[error("search failed: {0}")]
    Search(String),
}

pub type Result<T> = std::result::Result<T, Error>;
