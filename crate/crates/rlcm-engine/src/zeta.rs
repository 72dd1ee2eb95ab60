use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rlcm_analysis::ratio;
use rlcm_core::RightLcmSemigroup;
use serde::Serialize;

use crate::value::{pow, to_f64, StateValue, FLOAT_BUDGET};
use crate::EngineError;

/// How `β` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Mode {
    Integer(i64),
    Real(f64),
}

pub(crate) fn mode(beta: &BigRational) -> Mode {
    if beta.is_integer() {
        if let Some(b) = beta.to_integer().to_i64() {
            return Mode::Integer(b);
        }
    }
    Mode::Real(to_f64(beta))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaEval {
    pub index_set: Vec<u64>,
    #[serde(serialize_with = "ratio::serialize")]
    pub beta: BigRational,
    /// `None` when the product diverges.
    pub value: Option<StateValue>,
    pub converges: bool,
}

/// `ζ_I(β) = Π_{n ∈ I} (1 - n^{-(β-1)})^{-1}` for a finite set `I`.
pub fn zeta(index_set: &[u64], beta: &BigRational) -> Result<ZetaEval, EngineError> {
    if let Some(bad) = index_set.iter().find(|n| **n < 2) {
        return Err(EngineError::Precondition(format!(
            "index set entry {bad} is not at least 2"
        )));
    }
    let mut eval = ZetaEval {
        index_set: index_set.to_vec(),
        beta: beta.clone(),
        value: None,
        converges: false,
    };
    if index_set.is_empty() {
        eval.value = Some(StateValue::one());
        eval.converges = true;
        return Ok(eval);
    }
    if *beta <= BigRational::one() {
        return Ok(eval);
    }
    eval.converges = true;
    eval.value = Some(match mode(beta) {
        Mode::Integer(b) => {
            let mut v = BigRational::one();
            for &n in index_set {
                v /= BigRational::one() - pow(n, 1 - b);
            }
            StateValue::exact(v)
        }
        Mode::Real(b) => {
            let mut v = 1.0f64;
            for &n in index_set {
                v /= 1.0 - (n as f64).powf(1.0 - b);
            }
            let rounding_error = v * 8.0 * f64::EPSILON * index_set.len() as f64;
            if rounding_error > FLOAT_BUDGET * v {
                return Err(EngineError::Precision {
                    error: rounding_error,
                });
            }
            StateValue::Approximate {
                value: v,
                lo: v - rounding_error,
                hi: v + rounding_error,
                rounding_error,
                cutoff: None,
            }
        }
    });
    Ok(eval)
}

/// Elements of the free abelian monoid generated by `index_set` up to `bound`, ascending.
pub fn monoid_elements(index_set: &[u64], bound: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    let mut frontier = vec![1u64];
    while let Some(n) = frontier.pop() {
        for &p in index_set {
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

/// `Σ n^{1-β}` over `n ∈ <I>` with `n <= cutoff`, for integer `β`.
pub fn zeta_partial_sum(index_set: &[u64], beta: i64, cutoff: u64) -> BigRational {
    monoid_elements(index_set, cutoff)
        .into_iter()
        .fold(BigRational::zero(), |acc, n| acc + pow(n, 1 - beta))
}

/// The critical inverse temperature `β_c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalBeta {
    #[serde(serialize_with = "ratio::serialize")]
    pub value: BigRational,
    pub exact: bool,
    pub reason: String,
}

/// `β_c = max(1, abscissa of Σ_{n ∈ N(S)} n^{-(β-1)})`, which is 1 whenever
/// the irreducible scales form a finite set.
pub fn critical_beta(sem: &dyn RightLcmSemigroup) -> CriticalBeta {
    let irr = sem.irreducible_scales();
    let reason = if irr.is_empty() {
        "Irr(N(S)) is empty, so ζ_S is identically 1".to_string()
    } else {
        format!(
            "Irr(N(S)) = {irr:?} is finite, so ζ_S(β) is a finite product converging for all β > 1"
        )
    };
    CriticalBeta {
        value: BigRational::one(),
        exact: true,
        reason,
    }
}
