//! Finite truncations of the representation of `C*(S)` on `ℓ²(T) ⊗ ℓ²(S_c)`
//! built from the canonical trace, with exact checks of the defining
//! relations and the defect projections `d_n`, and a reconstruction of
//! KMS_β values from weighted fiber compressions.
//!
//! Basis vectors are pairs `(t, a)` with `t` a transversal element and `a`
//! a core element, and `V_s(ξ_t δ_a) = ξ_{i(st)} δ_{c(st) a}`. Operators
//! are partial permutations of the basis; images that leave the truncation
//! are recorded rather than dropped, so every check knows which columns it
//! can decide exactly.

mod reconstruct;
mod relations;
mod rep;

use rlcm_core::SemigroupError;
use rlcm_engine::EngineError;
use thiserror::Error;

pub use reconstruct::{
    ground_state_check, state_value, verify_reconstruction, GroundStateReport,
    ReconstructionReport, RepValue, SampleCheck,
};
pub use relations::{
    defect_projection, verify_relations, DefectProjection, RelationCheck, RelationReport,
};
pub use rep::{
    build_rep, build_rep_with_limit, Entry, Operator, RepSummary, TruncatedRep, MAX_BASIS,
};

#[derive(Debug, Error)]
pub enum RepError {
    #[error("basis of size {size} exceeds the cap {cap}; try level cap {suggested_level_cap} with core cap {suggested_core_cap}")]
    Sizing {
        size: usize,
        cap: usize,
        suggested_level_cap: u64,
        suggested_core_cap: u32,
    },
    #[error("excluded mass {excluded:e} exceeds the tolerance {tolerance:e}; raise the level cap")]
    Truncation { excluded: f64, tolerance: f64 },
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

pub type Result<T> = std::result::Result<T, RepError>;
