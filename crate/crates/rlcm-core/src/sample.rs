//! Bounded enumeration of elements, used by the checks and as a fallback
//! divisibility search.

use std::collections::BTreeSet;

use crate::{Divisibility, Result, RightLcmSemigroup, SemigroupElement};

/// Distinct products of at most `max_len` generators whose scale is at most `scale_bound`.
pub fn generator_words(
    sem: &dyn RightLcmSemigroup,
    max_len: u32,
    scale_bound: u64,
) -> Result<Vec<SemigroupElement>> {
    let gens = sem.generators();
    let mut seen: BTreeSet<SemigroupElement> = BTreeSet::new();
    let id = sem.identity();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let p = sem.multiply(w, g)?;
                if sem.scale(&p)?.get() <= scale_bound && seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

/// Every `t * a` with `t` in a transversal level up to `depth` and `a` a core
/// element of weight at most `core_weight`.
pub fn factored_elements(
    sem: &dyn RightLcmSemigroup,
    depth: u64,
    core_weight: u32,
) -> Result<Vec<SemigroupElement>> {
    let core = sem.enumerate_core(core_weight)?;
    let mut out = Vec::new();
    for level in sem.levels(depth)? {
        for t in &level.members {
            for a in &core {
                out.push(sem.multiply(t, a)?);
            }
        }
    }
    Ok(out)
}

/// Union of [`factored_elements`] and [`generator_words`], deduplicated and sorted.
pub fn sample_elements(
    sem: &dyn RightLcmSemigroup,
    depth: u64,
    core_weight: u32,
    word_len: u32,
) -> Result<Vec<SemigroupElement>> {
    let mut all: BTreeSet<SemigroupElement> = factored_elements(sem, depth, core_weight)?
        .into_iter()
        .collect();
    all.extend(generator_words(sem, word_len, depth)?);
    Ok(all.into_iter().collect())
}

/// Searches for `x` with `t * x == s` among generator words of length at most
/// `depth` right-multiplied by core elements of weight at most `depth`.
pub fn search_left_divide(
    sem: &dyn RightLcmSemigroup,
    t: &SemigroupElement,
    s: &SemigroupElement,
    depth: u32,
) -> Result<Divisibility> {
    let target = sem.scale(s)?.get();
    let base = sem.scale(t)?.get();
    if base == 0 || target % base != 0 {
        return Ok(Divisibility::NotDivisible);
    }
    let core = sem.enumerate_core(depth)?;
    for w in generator_words(sem, depth, target / base)? {
        for a in &core {
            let x = sem.multiply(&w, a)?;
            if sem.multiply(t, &x)? == *s {
                return Ok(Divisibility::Quotient { quotient: x });
            }
        }
    }
    Ok(Divisibility::DepthExhausted { depth })
}
