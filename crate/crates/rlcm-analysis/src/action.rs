use std::collections::BTreeSet;

use num_rational::BigRational;
use rayon::prelude::*;
use rlcm_core::{LcmOutcome, Result, RightLcmSemigroup, SemigroupElement, SemigroupError};
use serde::Serialize;

use crate::ratio::{self, ratio};

pub(crate) fn require_core(sem: &dyn RightLcmSemigroup, a: &SemigroupElement) -> Result<()> {
    if sem.is_core(a)? {
        Ok(())
    } else {
        Err(SemigroupError::Precondition(format!(
            "{} is not a core element",
            sem.format_element(a)
        )))
    }
}

fn require_transversal(sem: &dyn RightLcmSemigroup, t: &SemigroupElement) -> Result<()> {
    if sem.factor(t)?.transversal_part == *t {
        Ok(())
    } else {
        Err(SemigroupError::Precondition(format!(
            "{} is not a transversal element",
            sem.format_element(t)
        )))
    }
}

/// `α_a(t) = i(a t)`.
pub fn alpha(
    sem: &dyn RightLcmSemigroup,
    a: &SemigroupElement,
    t: &SemigroupElement,
) -> Result<SemigroupElement> {
    require_core(sem, a)?;
    require_transversal(sem, t)?;
    Ok(sem.factor(&sem.multiply(a, t)?)?.transversal_part)
}

/// `α_a^{-1}(t)`, read off from `aS ∩ tS = a α_a^{-1}(t) S`.
pub fn alpha_inverse(
    sem: &dyn RightLcmSemigroup,
    a: &SemigroupElement,
    t: &SemigroupElement,
) -> Result<SemigroupElement> {
    require_core(sem, a)?;
    require_transversal(sem, t)?;
    match sem.right_lcm(a, t)? {
        LcmOutcome::Lcm {
            left_complement, ..
        } => Ok(sem.factor(&left_complement)?.transversal_part),
        LcmOutcome::Disjoint => Err(SemigroupError::Internal(format!(
            "core element {} has an ideal disjoint from {}",
            sem.format_element(a),
            sem.format_element(t)
        ))),
    }
}

/// `T_n^{a,b} ⊆ G_n^{a,b} ⊆ T_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSets {
    pub n: u64,
    /// `f` with `a f = b f`.
    pub exact: Vec<SemigroupElement>,
    /// `f` with `i(a f) = i(b f)`.
    pub class: Vec<SemigroupElement>,
}

pub fn fixed_on_level(
    sem: &dyn RightLcmSemigroup,
    a: &SemigroupElement,
    b: &SemigroupElement,
    n: u64,
    members: &[SemigroupElement],
) -> Result<FixedSets> {
    let mut out = FixedSets {
        n,
        exact: Vec::new(),
        class: Vec::new(),
    };
    for f in members {
        let (af, bf) = (sem.multiply(a, f)?, sem.multiply(b, f)?);
        if af == bf {
            out.exact.push(f.clone());
            out.class.push(f.clone());
        } else if sem.factor(&af)?.transversal_part == sem.factor(&bf)?.transversal_part {
            out.class.push(f.clone());
        }
    }
    Ok(out)
}

pub fn fixed_sets(
    sem: &dyn RightLcmSemigroup,
    a: &SemigroupElement,
    b: &SemigroupElement,
    n: u64,
) -> Result<FixedSets> {
    require_core(sem, a)?;
    require_core(sem, b)?;
    let members = sem.transversal(n)?;
    if members.is_empty() {
        return Err(SemigroupError::Precondition(format!(
            "{n} is not a scale value"
        )));
    }
    fixed_on_level(sem, a, b, n, &members)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaLevel {
    pub n: u64,
    #[serde(serialize_with = "ratio::serialize")]
    pub kappa: BigRational,
    pub exact: usize,
    pub class: usize,
    pub g_minus_t: usize,
}

/// `κ_{a,b,n} = |T_n^{a,b}| / n` per level with an enclosure of the limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaTable {
    pub pair: (String, String),
    pub levels: Vec<KappaLevel>,
    /// `[κ_n, κ_n + |G_n \ T_n| / n]` at the deepest level.
    #[serde(serialize_with = "ratio::serialize_pair")]
    pub enclosure: (BigRational, BigRational),
}

impl KappaTable {
    pub fn deepest(&self) -> &KappaLevel {
        self.levels
            .last()
            .expect("a kappa table has at least one level")
    }

    pub fn width(&self) -> BigRational {
        &self.enclosure.1 - &self.enclosure.0
    }

    /// `κ_m <= κ_n` whenever `m` divides `n`.
    pub fn is_monotone(&self) -> bool {
        self.levels.iter().all(|x| {
            self.levels
                .iter()
                .filter(|y| y.n % x.n == 0)
                .all(|y| x.kappa <= y.kappa)
        })
    }
}

pub fn kappa_table(
    sem: &dyn RightLcmSemigroup,
    a: &SemigroupElement,
    b: &SemigroupElement,
    max_level: u64,
) -> Result<KappaTable> {
    require_core(sem, a)?;
    require_core(sem, b)?;
    let levels = sem.levels(max_level)?;
    let sets: Vec<FixedSets> = levels
        .par_iter()
        .map(|l| fixed_on_level(sem, a, b, l.n, &l.members))
        .collect::<Result<_>>()?;
    let levels: Vec<KappaLevel> = sets
        .iter()
        .map(|s| KappaLevel {
            n: s.n,
            kappa: ratio(s.exact.len(), s.n),
            exact: s.exact.len(),
            class: s.class.len(),
            g_minus_t: s.class.len() - s.exact.len(),
        })
        .collect();
    let last = levels
        .last()
        .ok_or_else(|| SemigroupError::Precondition("no level up to max-level".into()))?;
    let enclosure = (
        last.kappa.clone(),
        &last.kappa + ratio(last.g_minus_t, last.n),
    );
    Ok(KappaTable {
        pair: (sem.format_element(a), sem.format_element(b)),
        levels,
        enclosure,
    })
}

/// Comparison of `G_{mn} \ T_{mn}` with its composition from levels `m` and `n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProductRuleReport {
    pub checked: Vec<(u64, u64)>,
    pub mismatches: Vec<(u64, u64)>,
}

impl ProductRuleReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn defect(fs: FixedSets) -> Vec<SemigroupElement> {
    let exact: BTreeSet<_> = fs.exact.into_iter().collect();
    fs.class
        .into_iter()
        .filter(|f| !exact.contains(f))
        .collect()
}

/// Checks `G_{mn} \ T_{mn} = { i(f f') : f ∈ G_m \ T_m, f' ∈ G_n \ T_n for (c(af), c(bf)) }`
/// for all nontrivial scale values with `m n <= depth`.
pub fn product_rule(
    sem: &dyn RightLcmSemigroup,
    a: &SemigroupElement,
    b: &SemigroupElement,
    depth: u64,
) -> Result<ProductRuleReport> {
    require_core(sem, a)?;
    require_core(sem, b)?;
    let scales: Vec<u64> = sem
        .scale_values(depth)
        .into_iter()
        .filter(|n| *n > 1)
        .collect();
    let pairs: Vec<(u64, u64)> = scales
        .iter()
        .flat_map(|&m| scales.iter().map(move |&n| (m, n)))
        .filter(|(m, n)| m.checked_mul(*n).is_some_and(|mn| mn <= depth))
        .collect();
    let results: Vec<bool> = pairs
        .par_iter()
        .map(|&(m, n)| {
            let direct: BTreeSet<_> = defect(fixed_sets(sem, a, b, m * n)?).into_iter().collect();
            let tn = sem.transversal(n)?;
            let mut composed = BTreeSet::new();
            for f in defect(fixed_sets(sem, a, b, m)?) {
                let ca = sem.factor(&sem.multiply(a, &f)?)?.core_part;
                let cb = sem.factor(&sem.multiply(b, &f)?)?.core_part;
                for g in defect(fixed_on_level(sem, &ca, &cb, n, &tn)?) {
                    composed.insert(sem.factor(&sem.multiply(&f, &g)?)?.transversal_part);
                }
            }
            Ok(direct == composed)
        })
        .collect::<Result<_>>()?;
    let mut report = ProductRuleReport::default();
    for (pair, ok) in pairs.into_iter().zip(results) {
        if !ok {
            report.mismatches.push(pair);
        }
        report.checked.push(pair);
    }
    Ok(report)
}
