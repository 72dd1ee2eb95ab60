use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use rlcm_core::sample::sample_elements;
use rlcm_core::{
    Divisibility, LcmOutcome, Result, RightLcmSemigroup, SemigroupElement, SemigroupError,
};
use serde::Serialize;

use crate::Bounds;

/// A failing instance, given as formatted elements that parse back.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub reason: String,
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CheckResult {
    Pass { witness_count: u64 },
    Fail { counterexample: Counterexample },
    Exhausted { depth: u64 },
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        matches!(self, CheckResult::Pass { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub a1: CheckResult,
    pub a2: CheckResult,
    pub a3a: CheckResult,
    pub a3b: CheckResult,
    pub a4: CheckResult,
    pub depth: u64,
    pub irreducible_scales: Vec<u64>,
}

impl AdmissibilityReport {
    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed())
    }

    pub fn checks(&self) -> [(&'static str, &CheckResult); 5] {
        [
            ("A1", &self.a1),
            ("A2", &self.a2),
            ("A3a", &self.a3a),
            ("A3b", &self.a3b),
            ("A4", &self.a4),
        ]
    }
}

enum Step {
    Ok(u64),
    Fail(Counterexample),
    Exhausted,
}

fn merge(steps: Vec<Result<Step>>, depth: u64) -> Result<CheckResult> {
    let mut count = 0;
    let mut exhausted = false;
    for step in steps {
        match step? {
            Step::Ok(k) => count += k,
            Step::Fail(counterexample) => return Ok(CheckResult::Fail { counterexample }),
            Step::Exhausted => exhausted = true,
        }
    }
    Ok(if exhausted {
        CheckResult::Exhausted { depth }
    } else {
        CheckResult::Pass {
            witness_count: count,
        }
    })
}

fn fail(
    sem: &dyn RightLcmSemigroup,
    reason: impl Into<String>,
    elements: &[&SemigroupElement],
) -> Step {
    Step::Fail(Counterexample {
        reason: reason.into(),
        elements: elements.iter().map(|e| sem.format_element(e)).collect(),
    })
}

struct Context<'a> {
    sem: &'a dyn RightLcmSemigroup,
    depth: u64,
    samples: Vec<SemigroupElement>,
    scales: Vec<u64>,
    transversals: BTreeMap<u64, Vec<SemigroupElement>>,
    nonunit_core: Vec<SemigroupElement>,
}

/// Checks (A1)-(A4) on every element of scale at most `bounds.depth` reached
/// by the element sample.
pub fn check_admissible(
    sem: &dyn RightLcmSemigroup,
    bounds: &Bounds,
) -> Result<AdmissibilityReport> {
    if bounds.depth == 0 {
        return Err(SemigroupError::Precondition(
            "depth must be at least 1".into(),
        ));
    }
    let scales = sem.scale_values(bounds.depth);
    let transversals = scales
        .iter()
        .map(|&n| Ok((n, sem.transversal(n)?)))
        .collect::<Result<_>>()?;
    let mut nonunit_core = Vec::new();
    for a in sem.enumerate_core(bounds.core_weight)? {
        if !sem.is_unit(&a)? {
            nonunit_core.push(a);
        }
    }
    let cx = Context {
        sem,
        depth: bounds.depth,
        samples: sample_elements(sem, bounds.depth, bounds.core_weight, bounds.word_len)?,
        scales,
        transversals,
        nonunit_core,
    };
    Ok(AdmissibilityReport {
        a1: a1(&cx)?,
        a2: a2(&cx)?,
        a3a: a3a(&cx)?,
        a3b: a3b(&cx)?,
        a4: a4(&cx)?,
        depth: bounds.depth,
        irreducible_scales: sem.irreducible_scales(),
    })
}

/// `x` is core-irreducible when it is not core and no `t * c` with `t` in the
/// transversal of its scale and `c` a non-unit core element left divides it.
fn core_irreducible(cx: &Context, x: &SemigroupElement) -> Result<Step> {
    let sem = cx.sem;
    if sem.is_core(x)? {
        return Ok(fail(sem, "element is a core element", &[x]));
    }
    let n = sem.scale(x)?.get();
    let owned;
    let level = match cx.transversals.get(&n) {
        Some(l) => l,
        None => {
            owned = sem.transversal(n)?;
            &owned
        }
    };
    let depth = u32::try_from(cx.depth).unwrap_or(u32::MAX);
    let mut exhausted = false;
    let mut tests = 0;
    for t in level {
        for c in &cx.nonunit_core {
            let tc = sem.multiply(t, c)?;
            match sem.left_divide(&tc, x, depth)? {
                Divisibility::Quotient { quotient } => {
                    return Ok(fail(
                        sem,
                        "x = t c q with c a non-unit core element",
                        &[x, t, c, &quotient],
                    ));
                }
                Divisibility::NotDivisible => tests += 1,
                Divisibility::DepthExhausted { .. } => exhausted = true,
            }
        }
    }
    Ok(if exhausted {
        Step::Exhausted
    } else {
        Step::Ok(tests)
    })
}

fn a1(cx: &Context) -> Result<CheckResult> {
    let sem = cx.sem;
    let id = sem.identity();
    let mut parts = BTreeSet::new();
    for s in &cx.samples {
        let f = sem.factor(s)?;
        if sem.multiply(&f.transversal_part, &f.core_part)? != *s || !sem.is_core(&f.core_part)? {
            return Ok(CheckResult::Fail {
                counterexample: Counterexample {
                    reason: "factor does not return s = i(s) c(s) with c(s) core".into(),
                    elements: vec![sem.format_element(s)],
                },
            });
        }
        if f.transversal_part != id {
            parts.insert(f.transversal_part);
        }
    }
    let parts: Vec<_> = parts.into_iter().collect();
    let steps = parts.par_iter().map(|i| core_irreducible(cx, i)).collect();
    merge(steps, cx.depth)
}

fn a2(cx: &Context) -> Result<CheckResult> {
    let sem = cx.sem;
    let id = sem.identity();
    let all: Vec<&SemigroupElement> = cx.transversals.values().flatten().collect();
    let steps = (0..all.len())
        .into_par_iter()
        .map(|i| {
            let mut count = 0;
            for j in i..all.len() {
                let LcmOutcome::Lcm { lcm, .. } = sem.right_lcm(all[i], all[j])? else {
                    count += 1;
                    continue;
                };
                if lcm != id {
                    let c = sem.factor(&lcm)?.core_part;
                    if sem.is_core(&lcm)? || !sem.is_unit(&c)? {
                        return Ok(fail(
                            sem,
                            "right LCM is not core-irreducible",
                            &[all[i], all[j], &lcm],
                        ));
                    }
                }
                count += 1;
            }
            Ok(Step::Ok(count))
        })
        .collect();
    merge(steps, cx.depth)
}

fn a3a(cx: &Context) -> Result<CheckResult> {
    let sem = cx.sem;
    let mut count = 0;
    for (&n, level) in &cx.transversals {
        if level.len() as u64 != n {
            return Ok(CheckResult::Fail {
                counterexample: Counterexample {
                    reason: format!("transversal of scale {n} has {} elements", level.len()),
                    elements: level.iter().map(|t| sem.format_element(t)).collect(),
                },
            });
        }
        for t in level {
            if sem.scale(t)?.get() != n || sem.factor(t)?.transversal_part != *t {
                return merge(
                    vec![Ok(fail(
                        sem,
                        format!("not a canonical member of scale {n}"),
                        &[t],
                    ))],
                    0,
                );
            }
            count += 1;
        }
    }
    let sets: BTreeMap<u64, BTreeSet<&SemigroupElement>> = cx
        .transversals
        .iter()
        .map(|(n, l)| (*n, l.iter().collect()))
        .collect();
    for s in &cx.samples {
        let n = sem.scale(s)?.get();
        let i = sem.factor(s)?.transversal_part;
        if !sets.get(&n).is_some_and(|set| set.contains(&i)) {
            return merge(
                vec![Ok(fail(
                    sem,
                    format!("i(s) is not in the transversal of scale {n}"),
                    &[s, &i],
                ))],
                0,
            );
        }
        count += 1;
    }
    Ok(CheckResult::Pass {
        witness_count: count,
    })
}

fn a3b(cx: &Context) -> Result<CheckResult> {
    let sem = cx.sem;
    let mut steps = Vec::new();
    for level in cx.transversals.values() {
        let pairwise = (0..level.len())
            .into_par_iter()
            .map(|i| {
                for j in i + 1..level.len() {
                    if !sem.right_lcm(&level[i], &level[j])?.is_disjoint() {
                        return Ok(fail(
                            sem,
                            "two members of one transversal level intersect",
                            &[&level[i], &level[j]],
                        ));
                    }
                }
                Ok(Step::Ok(level.len().saturating_sub(i + 1) as u64))
            })
            .collect::<Vec<_>>();
        steps.extend(pairwise);
    }
    let foundation = cx
        .samples
        .par_iter()
        .map(|s| {
            for (n, level) in &cx.transversals {
                let mut met = false;
                for f in level {
                    if !sem.right_lcm(s, f)?.is_disjoint() {
                        met = true;
                        break;
                    }
                }
                if !met {
                    return Ok(fail(
                        sem,
                        format!("sS misses every fS with f of scale {n}"),
                        &[s],
                    ));
                }
            }
            Ok(Step::Ok(cx.transversals.len() as u64))
        })
        .collect::<Vec<_>>();
    steps.extend(foundation);
    merge(steps, cx.depth)
}

/// Number of multisets over `irr` with product `n`.
fn factorizations(n: u64, irr: &[u64]) -> u64 {
    match irr.split_first() {
        None => u64::from(n == 1),
        Some((&p, rest)) => {
            let mut total = factorizations(n, rest);
            let mut m = n;
            while p > 1 && m % p == 0 {
                m /= p;
                total += factorizations(m, rest);
            }
            total
        }
    }
}

fn a4(cx: &Context) -> Result<CheckResult> {
    let sem = cx.sem;
    let irr = sem.irreducible_scales();
    for &n in &cx.scales {
        let k = factorizations(n, &irr);
        if k != 1 {
            return Ok(CheckResult::Fail {
                counterexample: Counterexample {
                    reason: format!("scale {n} has {k} factorizations over {irr:?}"),
                    elements: Vec::new(),
                },
            });
        }
    }
    let scales: BTreeSet<u64> = cx.scales.iter().copied().collect();
    for s in &cx.samples {
        let n = sem.scale(s)?.get();
        if !scales.contains(&n) {
            return merge(
                vec![Ok(fail(
                    sem,
                    format!("scale {n} is not generated by {irr:?}"),
                    &[s],
                ))],
                0,
            );
        }
    }
    Ok(CheckResult::Pass {
        witness_count: (cx.scales.len() + cx.samples.len()) as u64,
    })
}
