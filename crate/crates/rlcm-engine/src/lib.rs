//! Zeta functions, the critical inverse temperature, and values of KMS_β,
//! KMS_∞ and ground states on spanning elements `v_s v_t^*`.
//!
//! Integer `β` is evaluated in exact rational arithmetic; series are summed
//! up to a scale cutoff and returned as enclosures whose width is the exact
//! ζ tail. Non-integer `β` uses floating point with a tracked error budget
//! of `2^-40`.

mod classify;
mod state;
mod value;
mod zeta;

use rlcm_core::SemigroupError;
use thiserror::Error;

pub use classify::{classify, Classification, Evidence, Item, Status, Temperature};
pub use state::{
    boundary_factoring, foundation_sum, ground_state_value, kms_value, sample_spanning,
    trace_check, trace_value, BoundaryReport, FoundationSum, SpanningElement, TraceCheck,
    TraceSpec,
};
pub use value::{pow, to_f64, StateValue, Truncation, Weight, FLOAT_BUDGET};
pub use zeta::{critical_beta, monoid_elements, zeta, zeta_partial_sum, CriticalBeta, ZetaEval};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("β = {beta} is below 1: there are no KMS_β-states for β < 1")]
    BelowOne { beta: String },
    #[error("{0}")]
    Precondition(String),
    #[error("rounding error {error:e} exceeds the 2^-40 budget")]
    Precision { error: f64 },
    #[error("not admissible at depth {depth}: {failed} failed")]
    NotAdmissible { depth: u64, failed: String },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}
