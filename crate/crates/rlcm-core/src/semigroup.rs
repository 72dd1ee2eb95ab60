use serde::{Deserialize, Serialize};

use crate::{
    Divisibility, Factorization, FamilyKind, FamilyTag, LcmOutcome, Result, ScaleValue,
    SemigroupElement, SemigroupError,
};

/// One level `T_n` of the canonical transversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub n: u64,
    pub members: Vec<SemigroupElement>,
}

/// A family-level closed form for an action property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub holds: bool,
    pub reason: String,
    /// A pair of core elements exhibiting the failure, when one is known.
    pub witness: Option<(SemigroupElement, SemigroupElement)>,
}

impl Certificate {
    pub fn holds(reason: impl Into<String>) -> Self {
        Certificate {
            holds: true,
            reason: reason.into(),
            witness: None,
        }
    }

    pub fn fails(
        reason: impl Into<String>,
        witness: Option<(SemigroupElement, SemigroupElement)>,
    ) -> Self {
        Certificate {
            holds: false,
            reason: reason.into(),
            witness,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForms {
    pub faithful: Option<Certificate>,
    pub almost_free: Option<Certificate>,
    pub finite_propagation: Option<Certificate>,
}

/// `max(irr)^3`, or 1 when there are no irreducible scales.
pub fn default_depth(irr: &[u64]) -> u64 {
    irr.iter()
        .copied()
        .max()
        .map(|m| m.saturating_pow(3))
        .unwrap_or(1)
}

/// The contract every family implements.
///
/// All methods are pure. Elements built by a different instance are rejected
/// with [`SemigroupError::FamilyMismatch`].
pub trait RightLcmSemigroup: Send + Sync {
    fn tag(&self) -> FamilyTag;

    /// Short human readable name, e.g. `BS(2,3)+`.
    fn name(&self) -> String;

    fn identity(&self) -> SemigroupElement;

    fn multiply(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<SemigroupElement>;

    fn right_lcm(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<LcmOutcome>;

    /// Decides `s ∈ tS`. Closed-form families ignore `depth`.
    fn left_divide(
        &self,
        t: &SemigroupElement,
        s: &SemigroupElement,
        depth: u32,
    ) -> Result<Divisibility>;

    fn scale(&self, s: &SemigroupElement) -> Result<ScaleValue>;

    fn is_core(&self, s: &SemigroupElement) -> Result<bool> {
        Ok(self.scale(s)?.get() == 1)
    }

    fn is_unit(&self, s: &SemigroupElement) -> Result<bool>;

    fn factor(&self, s: &SemigroupElement) -> Result<Factorization>;

    fn core_equivalent(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<bool> {
        Ok(self.factor(s)?.transversal_part == self.factor(t)?.transversal_part)
    }

    /// The canonical `T_n`, empty when `n` is not a scale value.
    fn transversal(&self, n: u64) -> Result<Vec<SemigroupElement>>;

    /// Core elements of weight at most `max_weight`, identity first, each once.
    fn enumerate_core(&self, max_weight: u32) -> Result<Vec<SemigroupElement>>;

    fn core_weight(&self, a: &SemigroupElement) -> Result<u32>;

    /// `Irr(N(S))`, sorted.
    fn irreducible_scales(&self) -> Vec<u64>;

    /// A finite set whose products reach every element up to core factors.
    fn generators(&self) -> Vec<SemigroupElement>;

    fn parse_element(&self, input: &str) -> Result<SemigroupElement>;

    fn format_element(&self, s: &SemigroupElement) -> String;

    fn closed_forms(&self) -> ClosedForms {
        ClosedForms::default()
    }

    /// Scale values `n ∈ N(S)` with `n <= bound`, ascending.
    fn scale_values(&self, bound: u64) -> Vec<u64> {
        let irr = self.irreducible_scales();
        let mut out = vec![1u64];
        let mut frontier = vec![1u64];
        while let Some(n) = frontier.pop() {
            for &p in &irr {
                if let Some(m) = n.checked_mul(p) {
                    if m <= bound && !out.contains(&m) {
                        out.push(m);
                        frontier.push(m);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Transversal levels up to `depth`, ascending in `n`.
    fn levels(&self, depth: u64) -> Result<Vec<Level>> {
        self.scale_values(depth)
            .into_iter()
            .map(|n| {
                Ok(Level {
                    n,
                    members: self.transversal(n)?,
                })
            })
            .collect()
    }

    fn kind(&self) -> FamilyKind {
        self.tag().kind
    }

    fn check_tag(&self, s: &SemigroupElement) -> Result<()> {
        if s.tag() == self.tag() {
            Ok(())
        } else {
            Err(SemigroupError::FamilyMismatch {
                expected: self.tag().to_string(),
                found: s.tag().to_string(),
            })
        }
    }
}
