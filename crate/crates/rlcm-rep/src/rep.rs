use std::collections::BTreeMap;

use rlcm_core::{Divisibility, RightLcmSemigroup, SemigroupElement};
use rlcm_engine::TraceSpec;
use serde::Serialize;

use crate::{RepError, Result};

/// Default cap on the number of basis vectors.
pub const MAX_BASIS: usize = 1 << 16;

const DIVIDE_DEPTH: u32 = 8;

/// Where an operator sends one basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "to", content = "index", rename_all = "kebab-case")]
pub enum Entry {
    Basis(usize),
    /// The image is the zero vector.
    Zero,
    /// The image is a basis vector of the full space outside the truncation.
    Outside,
}

/// A 0/1 matrix with at most one nonzero entry per column, stored column-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    pub label: String,
    pub columns: Vec<Entry>,
}

impl Operator {
    pub fn apply(&self, x: Entry) -> Entry {
        match x {
            Entry::Basis(i) => self.columns[i],
            other => other,
        }
    }

    /// `(row, column)` positions of the ones.
    pub fn nonzeros(&self) -> Vec<(usize, usize)> {
        self.columns
            .iter()
            .enumerate()
            .filter_map(|(j, e)| match e {
                Entry::Basis(i) => Some((*i, j)),
                _ => None,
            })
            .collect()
    }

    pub fn outside(&self) -> usize {
        self.columns
            .iter()
            .filter(|e| **e == Entry::Outside)
            .count()
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedRep {
    pub instance: String,
    pub level_cap: u64,
    pub core_cap: u32,
    pub basis: Vec<(SemigroupElement, SemigroupElement)>,
    /// Basis indices of each fiber `ξ_t ⊗ ℓ²(S_c)`, keyed like `transversal`.
    pub fibers: Vec<Vec<usize>>,
    pub transversal: Vec<SemigroupElement>,
    pub scales: Vec<u64>,
    /// `V_g` for each generator `g`.
    pub generators: Vec<(SemigroupElement, Operator)>,
    /// Basis vectors whose images under every generator stay in the basis.
    pub interior: Vec<bool>,
    index: BTreeMap<(SemigroupElement, SemigroupElement), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSummary {
    pub label: String,
    pub nonzeros: usize,
    pub outside: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepSummary {
    pub instance: String,
    pub level_cap: u64,
    pub core_cap: u32,
    pub basis_size: usize,
    pub interior_size: usize,
    pub fibers: usize,
    pub generators: Vec<GeneratorSummary>,
}

fn basis_size(sem: &dyn RightLcmSemigroup, level_cap: u64, core_cap: u32) -> Result<usize> {
    let core = sem.enumerate_core(core_cap)?.len();
    let mut t = 0;
    for n in sem.scale_values(level_cap) {
        t += sem.transversal(n)?.len();
    }
    Ok(t * core)
}

fn suggest(sem: &dyn RightLcmSemigroup, core_cap: u32, limit: usize) -> Result<(u64, u32)> {
    for w in (0..=core_cap).rev() {
        let mut best = None;
        for n in sem.scale_values(u64::MAX / 2) {
            if basis_size(sem, n, w)? > limit {
                break;
            }
            best = Some(n);
        }
        if let Some(n) = best {
            return Ok((n, w));
        }
    }
    Ok((1, 0))
}

/// [`build_rep_with_limit`] with the default basis cap [`MAX_BASIS`].
pub fn build_rep(
    sem: &dyn RightLcmSemigroup,
    trace: &TraceSpec,
    level_cap: u64,
    core_cap: u32,
) -> Result<TruncatedRep> {
    build_rep_with_limit(sem, trace, level_cap, core_cap, MAX_BASIS)
}

pub fn build_rep_with_limit(
    sem: &dyn RightLcmSemigroup,
    trace: &TraceSpec,
    level_cap: u64,
    core_cap: u32,
    limit: usize,
) -> Result<TruncatedRep> {
    if *trace != TraceSpec::Canonical {
        return Err(RepError::Precondition(format!(
            "only the canonical trace is represented by matrices, not {}",
            trace.name()
        )));
    }
    if level_cap < 1 || core_cap < 1 {
        return Err(RepError::Precondition("caps must be at least 1".into()));
    }
    let size = basis_size(sem, level_cap, core_cap)?;
    if size > limit {
        let (suggested_level_cap, suggested_core_cap) = suggest(sem, core_cap, limit)?;
        return Err(RepError::Sizing {
            size,
            cap: limit,
            suggested_level_cap,
            suggested_core_cap,
        });
    }
    let core = sem.enumerate_core(core_cap)?;
    let mut rep = TruncatedRep {
        instance: sem.name(),
        level_cap,
        core_cap,
        basis: Vec::with_capacity(size),
        fibers: Vec::new(),
        transversal: Vec::new(),
        scales: Vec::new(),
        generators: Vec::new(),
        interior: Vec::new(),
        index: BTreeMap::new(),
    };
    for n in sem.scale_values(level_cap) {
        for t in sem.transversal(n)? {
            let mut fiber = Vec::with_capacity(core.len());
            for a in &core {
                let k = rep.basis.len();
                rep.index.insert((t.clone(), a.clone()), k);
                rep.basis.push((t.clone(), a.clone()));
                fiber.push(k);
            }
            rep.fibers.push(fiber);
            rep.transversal.push(t);
            rep.scales.push(n);
        }
    }
    let mut interior = vec![true; rep.basis.len()];
    for g in sem.generators() {
        let op = rep.operator(sem, &g)?;
        for (j, e) in op.columns.iter().enumerate() {
            interior[j] &= *e != Entry::Outside;
        }
        rep.generators.push((g, op));
    }
    rep.interior = interior;
    Ok(rep)
}

impl TruncatedRep {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.interior[j]).collect()
    }

    pub fn index_of(&self, t: &SemigroupElement, a: &SemigroupElement) -> Option<usize> {
        self.index.get(&(t.clone(), a.clone())).copied()
    }

    /// Basis vector of the element `s = i(s) c(s)`, if it is in the truncation.
    pub fn locate(&self, sem: &dyn RightLcmSemigroup, s: &SemigroupElement) -> Result<Entry> {
        let f = sem.factor(s)?;
        Ok(match self.index_of(&f.transversal_part, &f.core_part) {
            Some(k) => Entry::Basis(k),
            None => Entry::Outside,
        })
    }

    /// The element `t a` of `S` that the basis vector `ξ_t δ_a` stands for.
    pub fn element(&self, sem: &dyn RightLcmSemigroup, k: usize) -> Result<SemigroupElement> {
        let (t, a) = &self.basis[k];
        Ok(sem.multiply(t, a)?)
    }

    pub fn describe(&self, sem: &dyn RightLcmSemigroup, k: usize) -> String {
        let (t, a) = &self.basis[k];
        format!("({}, {})", sem.format_element(t), sem.format_element(a))
    }

    /// `V_s` on the truncation: `ξ_t δ_a ↦ ξ_{i(st)} δ_{c(st) a}`.
    pub fn operator(&self, sem: &dyn RightLcmSemigroup, s: &SemigroupElement) -> Result<Operator> {
        let mut columns = Vec::with_capacity(self.len());
        for (t, a) in &self.basis {
            let st = sem.factor(&sem.multiply(s, t)?)?;
            let image = sem.multiply(&st.core_part, a)?;
            columns.push(match self.index_of(&st.transversal_part, &image) {
                Some(k) => Entry::Basis(k),
                None => Entry::Outside,
            });
        }
        Ok(Operator {
            label: format!("V_{}", sem.format_element(s)),
            columns,
        })
    }

    /// `V_s^*` on the truncation, from left division: `ξ_t δ_a ↦ s \ (t a)`
    /// or zero when `s` does not divide `t a`.
    pub fn adjoint(&self, sem: &dyn RightLcmSemigroup, s: &SemigroupElement) -> Result<Operator> {
        let mut columns = Vec::with_capacity(self.len());
        for k in 0..self.len() {
            let x = self.element(sem, k)?;
            columns.push(match sem.left_divide(s, &x, DIVIDE_DEPTH)? {
                Divisibility::Quotient { quotient } => self.locate(sem, &quotient)?,
                Divisibility::NotDivisible => Entry::Zero,
                Divisibility::DepthExhausted { .. } => Entry::Outside,
            });
        }
        Ok(Operator {
            label: format!("V_{}*", sem.format_element(s)),
            columns,
        })
    }

    pub fn summary(&self) -> RepSummary {
        RepSummary {
            instance: self.instance.clone(),
            level_cap: self.level_cap,
            core_cap: self.core_cap,
            basis_size: self.len(),
            interior_size: self.interior.iter().filter(|x| **x).count(),
            fibers: self.fibers.len(),
            generators: self
                .generators
                .iter()
                .map(|(_, op)| GeneratorSummary {
                    label: op.label.clone(),
                    nonzeros: op.nonzeros().len(),
                    outside: op.outside(),
                })
                .collect(),
        }
    }
}
