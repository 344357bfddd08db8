//! Error types shared across the library.

use thiserror::Error;

/// Errors raised while ingesting a network description from a config document.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("document is not valid TOML: {0}")]
    Syntax(String),
    #[error("missing channel {0}")]
    MissingChannel(String),
    #[error("missing config key {0}")]
    MissingKey(String),
    #[error("channel {key} has {got} entries, expected {want}")]
    DimensionMismatch { key: String, got: usize, want: usize },
    #[error("channel {key} entry {index} is not finite")]
    NonFinite { key: String, index: usize },
    #[error("config key {key} is invalid: {reason}")]
    BadValue { key: String, reason: String },
}

/// Errors raised by the dense SDP solver.
#[derive(Debug, Error)]
pub enum SdpError {
    #[error("constraint {index} references unknown block {block}")]
    UnknownBlock { index: usize, block: String },
    #[error("constraint {index} matrix for block {block} is {got}x{got2}, block is {want}-dimensional")]
    ConstraintShape { index: usize, block: String, got: usize, got2: usize, want: usize },
    #[error("constraint {index} matrix for block {block} is not Hermitian (asymmetry {asym:.3e})")]
    NotHermitian { index: usize, block: String, asym: f64 },
    #[error("numerical failure after {iterations} iterations: {reason}")]
    NumericalFailure { iterations: usize, reason: String },
    #[error("problem is unbounded along the objective")]
    Unbounded,
}

/// Errors raised by the optimization drivers.
#[derive(Debug, Error)]
pub enum OptError {
    #[error("demands are unattainable: constraint set is infeasible even at zero rate")]
    ScenarioInfeasible,
    #[error("solver failure: {0}")]
    Solver(#[from] SdpError),
    #[error("randomization failed to find a feasible rank-1 design (relaxed bound {relaxed_value:.6})")]
    RandomizationFailure { relaxed_value: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid link statistics: {0}")]
    InvalidStats(String),
}
