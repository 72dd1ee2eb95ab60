//! Bounded verification of admissibility and of the action of the core on
//! the canonical transversal.
//!
//! Every check works on `&dyn RightLcmSemigroup` up to a scale bound and a
//! core weight bound. Family closed forms, when present, upgrade the bounded
//! evidence to a global verdict and are cross-checked against it.

mod action;
mod admissible;
mod properties;
pub mod ratio;

use rlcm_core::{default_depth, RightLcmSemigroup};
use serde::Serialize;

pub use action::{
    alpha, alpha_inverse, fixed_on_level, fixed_sets, kappa_table, product_rule, FixedSets,
    KappaLevel, KappaTable, ProductRuleReport,
};
pub use admissible::{check_admissible, AdmissibilityReport, CheckResult, Counterexample};
pub use properties::{
    alpha_kernel_witnesses, check_almost_free, check_faithful, check_propagation, ActionReport,
    PairData, PropagationData, Property, Verdict,
};

pub const DEFAULT_CORE_WEIGHT: u32 = 6;
pub const DEFAULT_WORD_LEN: u32 = 3;

/// Search limits shared by the checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Largest scale examined.
    pub depth: u64,
    pub core_weight: u32,
    /// Longest generator word added to the element sample.
    pub word_len: u32,
}

impl Bounds {
    /// `max(Irr)^3`, core weight 6 and words of length 3.
    pub fn for_instance(sem: &dyn RightLcmSemigroup) -> Self {
        Bounds {
            depth: default_depth(&sem.irreducible_scales()),
            core_weight: DEFAULT_CORE_WEIGHT,
            word_len: DEFAULT_WORD_LEN,
        }
    }

    pub fn with_depth(self, depth: u64) -> Self {
        Bounds { depth, ..self }
    }

    pub fn with_core_weight(self, core_weight: u32) -> Self {
        Bounds {
            core_weight,
            ..self
        }
    }
}
