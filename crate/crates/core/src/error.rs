//! Crate-wide error type.

use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// An index fell outside a model dimension.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A probability row failed to sum to one within tolerance.
    #[error("model integrity error: {0}")]
    ModelIntegrity(String),

    /// A Bayes update conditioned on an observation of probability zero.
    #[error("zero-probability event: {0}")]
    ZeroProbabilityEvent(String),

    /// Exact recursion requested on an infinite-horizon model.
    #[error("exact evaluation is unsupported for infinite horizons; use Monte Carlo estimation")]
    UnsupportedExact,

    /// The joint policy space exceeds the configured enumeration budget.
    #[error("enumeration budget exceeded: {joint} joint policies > budget {budget}")]
    EnumerationBudget { joint: String, budget: u64 },

    /// An environment specification violated its invariants.
    #[error("environment spec error: {0}")]
    Spec(String),

    /// `step` called on a finished episode.
    #[error("lifecycle error: step called after the episode terminated")]
    Lifecycle,

    /// A non-finite value appeared during a forward or backward pass.
    #[error("numeric error in op `{op}`: non-finite value")]
    Numeric { op: &'static str },

    /// A training batch or buffer was empty.
    #[error("empty batch: {0}")]
    EmptyBatch(&'static str),

    /// A training configuration failed validation.
    #[error("config error in field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    /// A checkpoint byte stream failed to parse.
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}
