//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// `d` does not describe a supported field (not squarefree, or d = 1).
    #[error("invalid field d = {d}: {reason}")]
    InvalidField { d: i64, reason: &'static str },

    /// Operation requires a quadratic field.
    #[error("unsupported for this field: {0}")]
    Unsupported(&'static str),

    /// Query point exceeds the table limit (or is otherwise outside the domain).
    #[error("{what} = {value} out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    /// Requested table or enumeration exceeds the configured budget.
    #[error("capacity exceeded in {what}: requested {requested}, budget {budget}")]
    Capacity {
        what: &'static str,
        requested: u64,
        budget: u64,
    },

    /// A numeric routine could not reach the requested tolerance. Carries the
    /// partial result and the rigorous bound it did achieve.
    #[error(
        "{what} did not converge: partial {partial}, achieved bound {achieved}, target {target}"
    )]
    NumericFailure {
        what: &'static str,
        partial: f64,
        achieved: f64,
        target: f64,
    },

    /// Main term `(cx)^m / zeta_K(ms)` is undefined because `zeta_K(ms)` diverges.
    #[error("main term undefined: m*s = {ms} but zeta_K only converges for arguments > 1")]
    UndefinedMainTerm { ms: u32 },

    /// The circle/ideal identity `N(r) = 4 j(r) + 1` failed at some radius.
    #[error("identity violation at r = {r}: N(r) = {lhs} but 4*j(r)+1 = {rhs}")]
    IdentityViolation { r: u64, lhs: u64, rhs: u64 },

    /// Exponent fit rejected (too few usable points, or a malformed series).
    #[error("fit refused: {0}")]
    FitRefused(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
