//! `F_m+ x N^n`: a free monoid on `m` letters times a free abelian core.
//!
//! Covers the plain free monoid (`n = 0`) and `N^n` alone (`m = 0`).

use rlcm_core::{
    Certificate, ClosedForms, Divisibility, Factorization, FamilyKind, FamilyTag, LcmOutcome,
    Payload, Result, RightLcmSemigroup, ScaleValue, SemigroupElement, SemigroupError,
};

use crate::spec::BuildError;
use crate::words::{all_words, checked_pow, exact_log, indexed_tokens, parse_error, word_parts};

#[derive(Debug, Clone)]
pub struct EasyArtin {
    m: u32,
    n: u32,
    tag: FamilyTag,
}

impl EasyArtin {
    pub fn new(m: u32, n: u32) -> std::result::Result<Self, BuildError> {
        if m == 1 {
            return Err(BuildError::invalid(
                "m",
                "m >= 2 (or m = 0 for a free abelian monoid)",
            ));
        }
        if m == 0 && n == 0 {
            return Err(BuildError::invalid(
                "n",
                "the trivial monoid is not supported",
            ));
        }
        let kind = if n == 0 {
            FamilyKind::FreeMonoid
        } else {
            FamilyKind::EasyArtin
        };
        Ok(EasyArtin {
            m,
            n,
            tag: FamilyTag::new(kind, &format!("{m},{n}")),
        })
    }

    pub fn free_monoid(m: u32) -> std::result::Result<Self, BuildError> {
        if m < 2 {
            return Err(BuildError::invalid("m", "m >= 2"));
        }
        Self::new(m, 0)
    }

    pub fn free_abelian(rank: u32) -> std::result::Result<Self, BuildError> {
        if rank == 0 {
            return Err(BuildError::invalid("rank", "rank >= 1"));
        }
        Self::new(0, rank)
    }

    pub fn alphabet(&self) -> u32 {
        self.m
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn element(&self, letters: Vec<u32>, exponents: Vec<u64>) -> SemigroupElement {
        SemigroupElement::new(self.tag, Payload::Word { letters, exponents })
    }

    pub fn letter(&self, x: u32) -> SemigroupElement {
        self.element(vec![x], vec![0; self.n as usize])
    }

    pub fn core_generator(&self, j: u32) -> SemigroupElement {
        let mut e = vec![0; self.n as usize];
        e[j as usize] = 1;
        self.element(Vec::new(), e)
    }

    pub(crate) fn parts<'a>(&self, s: &'a SemigroupElement) -> Result<(&'a [u32], &'a [u64])> {
        self.check_tag(s)?;
        let (w, e) = word_parts(s)?;
        if e.len() != self.n as usize {
            return Err(SemigroupError::MalformedElement(format!(
                "expected {} exponents",
                self.n
            )));
        }
        Ok((w, e))
    }

    fn core_vectors(&self, weight: u64) -> Vec<Vec<u64>> {
        let n = self.n as usize;
        let mut out = Vec::new();
        for total in 0..=weight {
            compositions(n, total, &mut Vec::with_capacity(n), &mut out);
        }
        out
    }
}

/// Pushes every vector of length `n` summing to `total` in lexicographically
/// decreasing order of the first entry.
pub(crate) fn compositions(n: usize, total: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if prefix.len() + 1 == n {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    if n == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(n, total - first, prefix, out);
        prefix.pop();
    }
}

fn add(a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            x.checked_add(*y)
                .ok_or(SemigroupError::Overflow("exponent"))
        })
        .collect()
}

impl RightLcmSemigroup for EasyArtin {
    fn tag(&self) -> FamilyTag {
        self.tag
    }

    fn name(&self) -> String {
        match (self.m, self.n) {
            (0, n) => format!("N^{n}"),
            (m, 0) => format!("F{m}+"),
            (m, n) => format!("F{m}+ x N^{n}"),
        }
    }

    fn identity(&self) -> SemigroupElement {
        self.element(Vec::new(), vec![0; self.n as usize])
    }

    fn multiply(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<SemigroupElement> {
        let (w, e) = self.parts(s)?;
        let (v, f) = self.parts(t)?;
        let mut letters = w.to_vec();
        letters.extend_from_slice(v);
        Ok(self.element(letters, add(e, f)?))
    }

    fn right_lcm(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<LcmOutcome> {
        let (w, e) = self.parts(s)?;
        let (v, f) = self.parts(t)?;
        let (long, short) = if w.len() >= v.len() { (w, v) } else { (v, w) };
        if !long.starts_with(short) {
            return Ok(LcmOutcome::Disjoint);
        }
        let top: Vec<u64> = e.iter().zip(f).map(|(x, y)| *x.max(y)).collect();
        let diff = |x: &[u64]| top.iter().zip(x).map(|(t, x)| t - x).collect::<Vec<_>>();
        Ok(LcmOutcome::Lcm {
            lcm: self.element(long.to_vec(), top.clone()),
            left_complement: self.element(long[w.len().min(long.len())..].to_vec(), diff(e)),
            right_complement: self.element(long[v.len().min(long.len())..].to_vec(), diff(f)),
        })
    }

    fn left_divide(
        &self,
        t: &SemigroupElement,
        s: &SemigroupElement,
        _depth: u32,
    ) -> Result<Divisibility> {
        let (w, e) = self.parts(t)?;
        let (v, f) = self.parts(s)?;
        if !v.starts_with(w) || e.iter().zip(f).any(|(x, y)| x > y) {
            return Ok(Divisibility::NotDivisible);
        }
        let rest = f.iter().zip(e).map(|(y, x)| y - x).collect();
        Ok(Divisibility::Quotient {
            quotient: self.element(v[w.len()..].to_vec(), rest),
        })
    }

    fn scale(&self, s: &SemigroupElement) -> Result<ScaleValue> {
        let (w, _) = self.parts(s)?;
        if w.is_empty() {
            return Ok(ScaleValue(1));
        }
        let n = checked_pow(u64::from(self.m), w.len())?;
        Ok(ScaleValue(s.scale_with(|_| n)))
    }

    fn is_core(&self, s: &SemigroupElement) -> Result<bool> {
        Ok(self.parts(s)?.0.is_empty())
    }

    fn is_unit(&self, s: &SemigroupElement) -> Result<bool> {
        let (w, e) = self.parts(s)?;
        Ok(w.is_empty() && e.iter().all(|x| *x == 0))
    }

    fn factor(&self, s: &SemigroupElement) -> Result<Factorization> {
        let (w, e) = self.parts(s)?;
        Ok(Factorization {
            transversal_part: self.element(w.to_vec(), vec![0; self.n as usize]),
            core_part: self.element(Vec::new(), e.to_vec()),
        })
    }

    fn transversal(&self, n: u64) -> Result<Vec<SemigroupElement>> {
        if n == 1 {
            return Ok(vec![self.identity()]);
        }
        let Some(k) = exact_log(u64::from(self.m), n) else {
            return Ok(Vec::new());
        };
        Ok(all_words(self.m, k)
            .into_iter()
            .map(|w| self.element(w, vec![0; self.n as usize]))
            .collect())
    }

    fn enumerate_core(&self, max_weight: u32) -> Result<Vec<SemigroupElement>> {
        Ok(self
            .core_vectors(u64::from(max_weight))
            .into_iter()
            .map(|e| self.element(Vec::new(), e))
            .collect())
    }

    fn core_weight(&self, a: &SemigroupElement) -> Result<u32> {
        let (w, e) = self.parts(a)?;
        if !w.is_empty() {
            return Err(SemigroupError::Precondition(
                "core weight of a non-core element".into(),
            ));
        }
        u32::try_from(e.iter().sum::<u64>()).map_err(|_| SemigroupError::Overflow("core weight"))
    }

    fn irreducible_scales(&self) -> Vec<u64> {
        if self.m >= 2 {
            vec![u64::from(self.m)]
        } else {
            Vec::new()
        }
    }

    fn generators(&self) -> Vec<SemigroupElement> {
        (0..self.m)
            .map(|x| self.letter(x))
            .chain((0..self.n).map(|j| self.core_generator(j)))
            .collect()
    }

    fn parse_element(&self, input: &str) -> Result<SemigroupElement> {
        let mut acc = self.identity();
        for (name, idx, exp) in indexed_tokens(input)? {
            let g = match name {
                'x' if idx < self.m => self.letter(idx),
                'z' if idx < self.n => self.core_generator(idx),
                _ => {
                    return Err(parse_error(
                        input,
                        &format!("unknown generator `{name}{idx}`"),
                    ))
                }
            };
            for _ in 0..exp {
                acc = self.multiply(&acc, &g)?;
            }
        }
        Ok(acc)
    }

    fn format_element(&self, s: &SemigroupElement) -> String {
        let Ok((w, e)) = self.parts(s) else {
            return "<foreign>".into();
        };
        let mut toks: Vec<String> = w.iter().map(|x| format!("x{x}")).collect();
        for (j, k) in e.iter().enumerate() {
            match k {
                0 => {}
                1 => toks.push(format!("z{j}")),
                k => toks.push(format!("z{j}^{k}")),
            }
        }
        if toks.is_empty() {
            "1".into()
        } else {
            toks.join(" ")
        }
    }

    fn closed_forms(&self) -> ClosedForms {
        let propagation = Some(Certificate::holds(
            "C_a = {a}: the core commutes with every word",
        ));
        if self.n == 0 {
            let c = Certificate::holds("the core is trivial");
            return ClosedForms {
                faithful: Some(c.clone()),
                almost_free: Some(c),
                finite_propagation: propagation,
            };
        }
        let c = Certificate::fails(
            "the core is central and acts trivially on the transversal",
            Some((self.core_generator(0), self.identity())),
        );
        ClosedForms {
            faithful: Some(c.clone()),
            almost_free: Some(c),
            finite_propagation: propagation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_enumeration_is_graded() {
        let f = EasyArtin::new(2, 2).unwrap();
        let core = f.enumerate_core(2).unwrap();
        assert_eq!(core.len(), 6);
        assert_eq!(core[0], f.identity());
        let weights: Vec<u32> = core.iter().map(|a| f.core_weight(a).unwrap()).collect();
        assert_eq!(weights, vec![0, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn lcm_of_prefix_words_takes_componentwise_max() {
        let f = EasyArtin::new(2, 1).unwrap();
        let s = f.parse_element("x0 z0^2").unwrap();
        let t = f.parse_element("x0 x1 z0").unwrap();
        let out = f.right_lcm(&s, &t).unwrap();
        assert_eq!(out.lcm().unwrap(), &f.parse_element("x0 x1 z0^2").unwrap());
        assert!(f
            .right_lcm(&f.letter(0), &f.letter(1))
            .unwrap()
            .is_disjoint());
    }

    #[test]
    fn parameters_are_validated() {
        assert!(EasyArtin::free_monoid(1).is_err());
        assert!(EasyArtin::new(1, 2).is_err());
        assert!(EasyArtin::free_abelian(0).is_err());
    }
}
