//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by parameter validation, evaluation and solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A family parameter is outside its admissible domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The grid size `m` does not satisfy `m > ceil(d_eps) + ceil(d_eps~)`.
    #[error(
        "grid size m = {m} too small: need m > ceil(d_eps) + ceil(d_eps~) = {ceil_d} + {ceil_dt}"
    )]
    GridTooSmall { m: usize, ceil_d: i64, ceil_dt: i64 },

    /// Evaluation requested at a pole of `c(xi)`; use the phase/limit path instead.
    #[error("pole of c(xi) at xi = {xi}: evaluate via the phase/limit path instead")]
    PoleEvaluation { xi: f64 },

    /// Argument outside the open interval required by the operation.
    #[error("xi = {xi} outside the required domain {domain}")]
    DomainViolation { xi: f64, domain: &'static str },

    /// Norm request below the explicit threshold `d_eps`.
    #[error("level l = {l} below d_eps = {d_eps}; low levels come from the Gram-Schmidt table")]
    BelowExplicitThreshold { l: i64, d_eps: f64 },

    /// Gram-Schmidt produced a numerically non-positive norm.
    #[error("non-positive norm Delta_{l} = {value}; moment truncation failed")]
    NonPositiveNorm { l: usize, value: f64 },

    /// Root solve did not converge within the iteration budget.
    #[error("node solve for l_hat = {l_hat} did not converge; last bracket [{lo}, {hi}]")]
    NonConvergence { l_hat: usize, lo: f64, hi: f64 },

    /// The requested point is not a node of the solved grid.
    #[error("xi = {xi} is not a node of the grid; the composite basis is defined on nodes only")]
    NotANode { xi: f64 },

    /// Integrand poles do not match the rule's untilded family.
    #[error("integrand pole family does not match the rule's untilded family")]
    FamilyMismatch,

    /// A check was requested outside its precondition.
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
