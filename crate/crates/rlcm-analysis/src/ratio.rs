//! Serialization of exact rationals as `{num, den}`.
//!
//! Numerator and denominator are plain integers when they fit in an `i64`
//! and decimal strings otherwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

#[derive(Serialize)]
#[serde(untagged)]
enum Int {
    Small(i64),
    Big(String),
}

fn int(x: &BigInt) -> Int {
    x.to_i64()
        .map_or_else(|| Int::Big(x.to_string()), Int::Small)
}

#[derive(Serialize)]
struct Pair {
    num: Int,
    den: Int,
}

pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    pair(r).serialize(s)
}

#[derive(Serialize)]
struct Interval {
    lo: Pair,
    hi: Pair,
}

fn pair(r: &BigRational) -> Pair {
    Pair {
        num: int(r.numer()),
        den: int(r.denom()),
    }
}

/// An enclosure `(lo, hi)` as `{lo, hi}`.
pub fn serialize_pair<S: Serializer>(
    r: &(BigRational, BigRational),
    s: S,
) -> Result<S::Ok, S::Error> {
    Interval {
        lo: pair(&r.0),
        hi: pair(&r.1),
    }
    .serialize(s)
}

pub fn ratio(num: usize, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
