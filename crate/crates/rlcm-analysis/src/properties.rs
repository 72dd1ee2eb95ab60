use std::collections::BTreeSet;

use rayon::prelude::*;
use rlcm_core::{Certificate, Level, Result, RightLcmSemigroup, SemigroupElement, SemigroupError};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Faithful,
    AlmostFree,
    FiniteStateProp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Holds {
        certificate: String,
    },
    Violated {
        witness: Option<(String, String)>,
        certificate: String,
    },
    UndecidedAtDepth {
        bound: u64,
    },
}

impl Verdict {
    pub fn holds(&self) -> Option<bool> {
        match self {
            Verdict::Holds { .. } => Some(true),
            Verdict::Violated { .. } => Some(false),
            Verdict::UndecidedAtDepth { .. } => None,
        }
    }
}

/// `|G_n^{a,b}|` for every level `n` up to the bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairData {
    pub pair: (String, String),
    pub fixed_counts: Vec<(u64, usize)>,
}

/// `C_a` accumulated over the nontrivial levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropagationData {
    pub element: String,
    /// `|{c(af) : f ∈ T_n}|` per level.
    pub sizes: Vec<(u64, usize)>,
    pub set: Vec<String>,
    /// The accumulated set did not change at the last level.
    pub stabilized: bool,
    /// The last level added no element of larger core weight.
    pub weight_bounded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub property: Property,
    pub verdict: Verdict,
    pub level: u64,
    pub core_weight: u32,
    /// Whether the bounded search is consistent with the closed form.
    pub search_agrees: Option<bool>,
    /// A pair the bounded search could not clear.
    pub candidate: Option<(String, String)>,
    pub pairs: Vec<PairData>,
    pub propagation: Vec<PropagationData>,
}

struct Table {
    core: Vec<SemigroupElement>,
    levels: Vec<Level>,
    /// `images[a][level][f] = (i(af), c(af))`.
    images: Vec<Vec<Vec<(SemigroupElement, SemigroupElement)>>>,
}

fn table(sem: &dyn RightLcmSemigroup, core_weight: u32, level: u64) -> Result<Table> {
    if core_weight == 0 || level == 0 {
        return Err(SemigroupError::Precondition(
            "bounds must be at least 1".into(),
        ));
    }
    let core = sem.enumerate_core(core_weight)?;
    let levels = sem.levels(level)?;
    let images = core
        .par_iter()
        .map(|a| {
            levels
                .iter()
                .map(|l| {
                    l.members
                        .iter()
                        .map(|f| {
                            let x = sem.factor(&sem.multiply(a, f)?)?;
                            Ok((x.transversal_part, x.core_part))
                        })
                        .collect()
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(Table {
        core,
        levels,
        images,
    })
}

impl Table {
    fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.core.len())
            .flat_map(|j| (0..j).map(move |i| (j, i)))
            .collect()
    }

    fn fixed_counts(&self, a: usize, b: usize) -> Vec<(u64, usize)> {
        self.levels
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let same = self.images[a][k]
                    .iter()
                    .zip(&self.images[b][k])
                    .filter(|(x, y)| x.0 == y.0)
                    .count();
                (l.n, same)
            })
            .collect()
    }

    fn pair_data(&self, sem: &dyn RightLcmSemigroup) -> Vec<(usize, usize, PairData)> {
        self.pairs()
            .into_iter()
            .map(|(a, b)| {
                let pair = (
                    sem.format_element(&self.core[a]),
                    sem.format_element(&self.core[b]),
                );
                (
                    a,
                    b,
                    PairData {
                        pair,
                        fixed_counts: self.fixed_counts(a, b),
                    },
                )
            })
            .collect()
    }

    fn acts_equally(&self, data: &PairData) -> bool {
        data.fixed_counts
            .iter()
            .zip(&self.levels)
            .all(|((_, k), l)| *k == l.members.len())
    }
}

fn format_pair(
    sem: &dyn RightLcmSemigroup,
    p: &(SemigroupElement, SemigroupElement),
) -> (String, String) {
    (sem.format_element(&p.0), sem.format_element(&p.1))
}

fn verdict(
    sem: &dyn RightLcmSemigroup,
    certificate: Option<&Certificate>,
    candidate: Option<&(String, String)>,
    level: u64,
) -> (Verdict, Option<bool>) {
    match certificate {
        Some(c) if c.holds => (
            Verdict::Holds {
                certificate: c.reason.clone(),
            },
            Some(candidate.is_none()),
        ),
        Some(c) => {
            let witness = c
                .witness
                .as_ref()
                .map(|w| format_pair(sem, w))
                .or_else(|| candidate.cloned());
            (
                Verdict::Violated {
                    witness,
                    certificate: c.reason.clone(),
                },
                Some(candidate.is_some()),
            )
        }
        None => (Verdict::UndecidedAtDepth { bound: level }, None),
    }
}

fn report(
    sem: &dyn RightLcmSemigroup,
    property: Property,
    certificate: Option<&Certificate>,
    candidate: Option<(String, String)>,
    (core_weight, level): (u32, u64),
) -> ActionReport {
    let (verdict, search_agrees) = verdict(sem, certificate, candidate.as_ref(), level);
    ActionReport {
        property,
        verdict,
        level,
        core_weight,
        search_agrees,
        candidate,
        pairs: Vec::new(),
        propagation: Vec::new(),
    }
}

/// Searches distinct core pairs for a transversal element of scale at most
/// `level` that separates their actions.
pub fn check_faithful(
    sem: &dyn RightLcmSemigroup,
    core_weight: u32,
    level: u64,
) -> Result<ActionReport> {
    let t = table(sem, core_weight, level)?;
    let data = t.pair_data(sem);
    let candidate = data
        .iter()
        .find(|(_, _, d)| t.acts_equally(d))
        .map(|(_, _, d)| d.pair.clone());
    let mut out = report(
        sem,
        Property::Faithful,
        sem.closed_forms().faithful.as_ref(),
        candidate,
        (core_weight, level),
    );
    out.pairs = data.into_iter().map(|(_, _, d)| d).collect();
    Ok(out)
}

/// Tracks `|Fix(α_a α_b^{-1}) ∩ T_n|`; a pair is cleared once some
/// nontrivial level has no fixed point.
pub fn check_almost_free(
    sem: &dyn RightLcmSemigroup,
    core_weight: u32,
    level: u64,
) -> Result<ActionReport> {
    let t = table(sem, core_weight, level)?;
    let data = t.pair_data(sem);
    let cleared = |d: &PairData| {
        d.fixed_counts
            .iter()
            .zip(&t.levels)
            .any(|((_, k), l)| *k == 0 && l.members.iter().any(|f| *f != sem.identity()))
    };
    let candidate = data
        .iter()
        .find(|(_, _, d)| !cleared(d))
        .map(|(_, _, d)| d.pair.clone());
    let mut out = report(
        sem,
        Property::AlmostFree,
        sem.closed_forms().almost_free.as_ref(),
        candidate,
        (core_weight, level),
    );
    out.pairs = data.into_iter().map(|(_, _, d)| d).collect();
    Ok(out)
}

/// Computes `C_a = { c(af) : f ∈ T, f ≠ 1 }` level by level for every core
/// element up to the weight bound.
pub fn check_propagation(
    sem: &dyn RightLcmSemigroup,
    core_weight: u32,
    level: u64,
) -> Result<ActionReport> {
    let t = table(sem, core_weight, level)?;
    let id = sem.identity();
    let nontrivial: Vec<usize> = (0..t.levels.len())
        .filter(|&k| t.levels[k].members.iter().any(|f| *f != id))
        .collect();
    let mut data = Vec::new();
    let mut candidate = None;
    for (a, elem) in t.core.iter().enumerate() {
        if *elem == id {
            continue;
        }
        let mut acc: BTreeSet<&SemigroupElement> = BTreeSet::new();
        let mut sizes = Vec::new();
        let mut stabilized = false;
        let mut weight_bounded = false;
        for (pos, &k) in nontrivial.iter().enumerate() {
            let here: BTreeSet<&SemigroupElement> = t.images[a][k].iter().map(|(_, c)| c).collect();
            sizes.push((t.levels[k].n, here.len()));
            if pos + 1 == nontrivial.len() && pos > 0 {
                let before = acc
                    .iter()
                    .map(|c| sem.core_weight(c))
                    .collect::<Result<Vec<_>>>()?;
                let now = here
                    .iter()
                    .map(|c| sem.core_weight(c))
                    .collect::<Result<Vec<_>>>()?;
                weight_bounded = now.iter().max() <= before.iter().max();
                stabilized = here.iter().all(|c| acc.contains(c));
            }
            acc.extend(here);
        }
        if !weight_bounded && candidate.is_none() {
            candidate = Some((sem.format_element(elem), sem.format_element(&id)));
        }
        data.push(PropagationData {
            element: sem.format_element(elem),
            sizes,
            set: acc.iter().map(|c| sem.format_element(c)).collect(),
            stabilized,
            weight_bounded,
        });
    }
    let certificate = sem.closed_forms().finite_propagation;
    let mut out = report(
        sem,
        Property::FiniteStateProp,
        certificate.as_ref(),
        candidate,
        (core_weight, level),
    );
    out.propagation = data;
    Ok(out)
}

/// Distinct core pairs `(a, b)` with `α_a = α_b` on every level up to `level`.
pub fn alpha_kernel_witnesses(
    sem: &dyn RightLcmSemigroup,
    core_weight: u32,
    level: u64,
) -> Result<Vec<(SemigroupElement, SemigroupElement)>> {
    let t = table(sem, core_weight, level)?;
    Ok(t.pair_data(sem)
        .into_iter()
        .filter(|(_, _, d)| t.acts_equally(d))
        .map(|(a, b, _)| (t.core[a].clone(), t.core[b].clone()))
        .collect())
}
