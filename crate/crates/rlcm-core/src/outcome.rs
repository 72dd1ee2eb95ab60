use serde::{Deserialize, Serialize};

use crate::SemigroupElement;

/// Result of intersecting two principal right ideals `sS` and `tS`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum LcmOutcome {
    Disjoint,
    /// `s * left_complement == lcm == t * right_complement`.
    Lcm {
        lcm: SemigroupElement,
        left_complement: SemigroupElement,
        right_complement: SemigroupElement,
    },
}

impl LcmOutcome {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, LcmOutcome::Disjoint)
    }

    pub fn lcm(&self) -> Option<&SemigroupElement> {
        match self {
            LcmOutcome::Disjoint => None,
            LcmOutcome::Lcm { lcm, .. } => Some(lcm),
        }
    }
}

/// `element == transversal_part * core_part`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub transversal_part: SemigroupElement,
    pub core_part: SemigroupElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScaleValue(pub u64);

impl ScaleValue {
    pub fn get(self) -> u64 {
        self.0
    }
}

/// Outcome of deciding `s ∈ tS`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Divisibility {
    Quotient {
        quotient: SemigroupElement,
    },
    NotDivisible,
    /// A bounded search ran out of depth before deciding.
    DepthExhausted {
        depth: u32,
    },
}

impl Divisibility {
    pub fn quotient(&self) -> Option<&SemigroupElement> {
        match self {
            Divisibility::Quotient { quotient } => Some(quotient),
            _ => None,
        }
    }

    pub fn into_quotient(self) -> Option<SemigroupElement> {
        match self {
            Divisibility::Quotient { quotient } => Some(quotient),
            _ => None,
        }
    }
}
