use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rlcm_analysis::ratio;
use serde::Serialize;

/// Relative rounding budget of the floating mode.
pub const FLOAT_BUDGET: f64 = 1.0 / (1u64 << 40) as f64;

/// Truncation data of a series evaluated up to `cutoff`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub cutoff: u64,
    /// `ζ_S(β)` minus the partial sum of `n^{1-β}` over scale values up to the cutoff.
    #[serde(serialize_with = "ratio::serialize")]
    pub tail_bound: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StateValue {
    Exact {
        #[serde(serialize_with = "ratio::serialize")]
        value: BigRational,
    },
    Enclosure {
        #[serde(serialize_with = "ratio::serialize")]
        lo: BigRational,
        #[serde(serialize_with = "ratio::serialize")]
        hi: BigRational,
        truncation: Option<Truncation>,
    },
    /// Floating evaluation for non-integer `β`; `[lo, hi]` already includes
    /// truncation and the tracked rounding error.
    Approximate {
        value: f64,
        lo: f64,
        hi: f64,
        rounding_error: f64,
        cutoff: Option<u64>,
    },
}

impl StateValue {
    pub fn exact(value: BigRational) -> Self {
        StateValue::Exact { value }
    }

    pub fn zero() -> Self {
        Self::exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::exact(BigRational::one())
    }

    /// Collapses an enclosure with equal ends.
    pub fn enclosure(lo: BigRational, hi: BigRational, truncation: Option<Truncation>) -> Self {
        if lo == hi {
            StateValue::Exact { value: lo }
        } else {
            StateValue::Enclosure { lo, hi, truncation }
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            StateValue::Exact { value } => Some(value),
            _ => None,
        }
    }

    /// Ends as floats.
    pub fn bounds_f64(&self) -> (f64, f64) {
        match self {
            StateValue::Exact { value } => (to_f64(value), to_f64(value)),
            StateValue::Enclosure { lo, hi, .. } => (to_f64(lo), to_f64(hi)),
            StateValue::Approximate { lo, hi, .. } => (*lo, *hi),
        }
    }

    /// Whether the exact rational `x` lies in the value.
    pub fn contains(&self, x: &BigRational) -> bool {
        match self {
            StateValue::Exact { value } => value == x,
            StateValue::Enclosure { lo, hi, .. } => lo <= x && x <= hi,
            StateValue::Approximate { lo, hi, .. } => {
                let x = to_f64(x);
                *lo <= x && x <= *hi
            }
        }
    }

    /// `hi - lo`, zero for exact values.
    pub fn width(&self) -> f64 {
        let (lo, hi) = self.bounds_f64();
        hi - lo
    }

    pub fn scale(&self, w: &Weight) -> StateValue {
        match (self, w) {
            (StateValue::Exact { value }, Weight::Exact(w)) => StateValue::exact(value * w),
            (StateValue::Enclosure { lo, hi, truncation }, Weight::Exact(w)) => {
                StateValue::enclosure(lo * w, hi * w, truncation.clone())
            }
            (v, w) => {
                let (lo, hi) = v.bounds_f64();
                let (w, werr) = w.to_f64();
                let err = match v {
                    StateValue::Approximate { rounding_error, .. } => *rounding_error,
                    _ => 0.0,
                };
                let value = (lo + hi) / 2.0 * w;
                let rounding_error = err * w + werr * hi.abs() + 4.0 * f64::EPSILON * value.abs();
                let cutoff = match v {
                    StateValue::Approximate { cutoff, .. } => *cutoff,
                    StateValue::Enclosure { truncation, .. } => {
                        truncation.as_ref().map(|t| t.cutoff)
                    }
                    StateValue::Exact { .. } => None,
                };
                StateValue::Approximate {
                    value,
                    lo: lo * w - rounding_error,
                    hi: hi * w + rounding_error,
                    rounding_error,
                    cutoff,
                }
            }
        }
    }
}

/// `N_s^{-β}`, exact for integer `β`.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Exact(BigRational),
    Float { value: f64, error: f64 },
}

impl Weight {
    pub fn to_f64(&self) -> (f64, f64) {
        match self {
            Weight::Exact(r) => (to_f64(r), 0.0),
            Weight::Float { value, error } => (*value, *error),
        }
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `n^e` for a possibly negative integer exponent.
pub fn pow(n: u64, e: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(n), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}
