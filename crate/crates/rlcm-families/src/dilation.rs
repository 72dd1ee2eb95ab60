//! `Z^d x|_A N` for an integer matrix `A` with `|det A| > 1`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rlcm_core::{
    Certificate, ClosedForms, Divisibility, Factorization, FamilyKind, FamilyTag, LcmOutcome,
    Payload, Result, RightLcmSemigroup, ScaleValue, SemigroupElement, SemigroupError,
};

use crate::snf::{char_poly, det, identity, mat_mul, mat_vec, Mat, Snf};
use crate::spec::BuildError;
use crate::words::parse_error;
use crate::AdsCondition;

#[derive(Debug, Clone)]
pub struct Dilation {
    a: Mat,
    abs_det: u64,
    snf: Arc<RwLock<HashMap<u32, Arc<(Mat, Snf)>>>>,
    tag: FamilyTag,
}

fn to_i64(v: &[i128]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| i64::try_from(*x).map_err(|_| SemigroupError::Overflow("lattice offset")))
        .collect()
}

fn widen(v: &[i64]) -> Vec<i128> {
    v.iter().map(|x| i128::from(*x)).collect()
}

impl Dilation {
    pub fn new(d: usize, a: &[Vec<i64>]) -> std::result::Result<Self, BuildError> {
        if d == 0 {
            return Err(BuildError::invalid("d", "d >= 1"));
        }
        if a.len() != d || a.iter().any(|row| row.len() != d) {
            return Err(BuildError::invalid("a", format!("a {d}x{d} matrix")));
        }
        let a: Mat = a.iter().map(|row| widen(row)).collect();
        let det = det(&a).map_err(|e| BuildError::invalid("a", e.to_string()))?;
        if det.abs() <= 1 {
            return Err(BuildError::invalid("a", format!("|det A| > 1, got {det}")));
        }
        let abs_det = u64::try_from(det.abs())
            .map_err(|_| BuildError::invalid("a", "determinant fits in 64 bits"))?;
        let tag = FamilyTag::new(FamilyKind::DilationMatrix, &format!("{a:?}"));
        Ok(Dilation {
            a,
            abs_det,
            snf: Arc::default(),
            tag,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &Mat {
        &self.a
    }

    pub fn element(&self, offset: Vec<i64>, power: u32) -> SemigroupElement {
        SemigroupElement::new(self.tag, Payload::Lattice { offset, power })
    }

    fn parts<'a>(&self, s: &'a SemigroupElement) -> Result<(&'a [i64], u32)> {
        self.check_tag(s)?;
        match s.payload() {
            Payload::Lattice { offset, power } if offset.len() == self.dim() => {
                Ok((offset, *power))
            }
            other => Err(SemigroupError::MalformedElement(format!(
                "expected a lattice payload, got {other:?}"
            ))),
        }
    }

    /// `A^n` together with its Smith normal form, cached per `n`.
    fn power(&self, n: u32) -> Result<Arc<(Mat, Snf)>> {
        if let Some(hit) = self.snf.read().expect("cache lock").get(&n) {
            return Ok(hit.clone());
        }
        let mut m = identity(self.dim());
        for _ in 0..n {
            m = mat_mul(&m, &self.a)?;
        }
        let snf = Snf::new(&m)?;
        let entry = Arc::new((m, snf));
        self.snf
            .write()
            .expect("cache lock")
            .insert(n, entry.clone());
        Ok(entry)
    }

    /// Least-nonnegative digit representing `v` modulo `A^n Z^d`.
    pub fn reduce(&self, v: &[i64], n: u32) -> Result<Vec<i64>> {
        to_i64(&self.power(n)?.1.reduce(&widen(v))?)
    }

    /// `A^{-n} v` when `v ∈ A^n Z^d`.
    pub fn divide(&self, v: &[i128], n: u32) -> Result<Option<Vec<i128>>> {
        self.power(n)?.1.solve(v)
    }

    fn sub(x: &[i64], y: &[i64]) -> Vec<i128> {
        x.iter()
            .zip(y)
            .map(|(a, b)| i128::from(*a) - i128::from(*b))
            .collect()
    }

    /// The intersection `(m,n)S ∩ (m',n')S` by lattice membership.
    pub fn ideal_test(&self, m: &[i64], n: u32, m2: &[i64], n2: u32) -> Result<LcmOutcome> {
        self.right_lcm(&self.element(m.to_vec(), n), &self.element(m2.to_vec(), n2))
    }

    /// Whether `A` has a monic integer factor of its characteristic polynomial
    /// with constant term `±1`; `None` when the dimension is above 3.
    pub fn has_unit_factor(&self) -> Result<Option<bool>> {
        let Some(c) = char_poly(&self.a)? else {
            return Ok(None);
        };
        let d = self.dim();
        let constant = c[0];
        let eval = |x: i128| {
            c.iter()
                .rev()
                .try_fold(0i128, |acc, k| acc.checked_mul(x)?.checked_add(*k))
        };
        let mut roots = Vec::new();
        for r in 1..=constant.abs() {
            if constant % r == 0 {
                for cand in [r, -r] {
                    if eval(cand) == Some(0) {
                        roots.push(cand);
                    }
                }
            }
        }
        let unit = roots
            .iter()
            .any(|r| r.abs() == 1 || (d == 3 && (constant / r).abs() == 1));
        Ok(Some(unit))
    }

    pub fn ads_conditions(&self) -> Vec<AdsCondition> {
        vec![
            AdsCondition::new(
                "finite-index",
                true,
                format!("[Z^d : A^n Z^d] = {}^n", self.abs_det),
            ),
            AdsCondition::new(
                "non-automorphism",
                true,
                format!("|det A| = {} > 1", self.abs_det),
            ),
            AdsCondition::new(
                "units",
                true,
                "S* = Z^d x {0} since N has no units besides 0",
            ),
            AdsCondition::new(
                "equal-index-conjugate",
                true,
                "equal index forces equal exponent in N",
            ),
        ]
    }
}

impl RightLcmSemigroup for Dilation {
    fn tag(&self) -> FamilyTag {
        self.tag
    }

    fn name(&self) -> String {
        format!("Z^{} x|_A N (|det A| = {})", self.dim(), self.abs_det)
    }

    fn identity(&self) -> SemigroupElement {
        self.element(vec![0; self.dim()], 0)
    }

    fn multiply(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<SemigroupElement> {
        let (g, n) = self.parts(s)?;
        let (h, k) = self.parts(t)?;
        let moved = mat_vec(&self.power(n)?.0, &widen(h))?;
        let sum: Vec<i128> = moved
            .iter()
            .zip(g)
            .map(|(x, y)| x + i128::from(*y))
            .collect();
        let power = n
            .checked_add(k)
            .ok_or(SemigroupError::Overflow("exponent"))?;
        Ok(self.element(to_i64(&sum)?, power))
    }

    fn right_lcm(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<LcmOutcome> {
        let (g, n) = self.parts(s)?;
        let (h, k) = self.parts(t)?;
        let swap = n > k;
        let ((g, n), (h, k)) = if swap {
            ((h, k), (g, n))
        } else {
            ((g, n), (h, k))
        };
        if self.divide(&Self::sub(h, g), n)?.is_none() {
            return Ok(LcmOutcome::Disjoint);
        }
        let r = self.reduce(h, k)?;
        let low = self
            .divide(&Self::sub(&r, g), n)?
            .ok_or_else(|| SemigroupError::Internal("lcm offset".into()))?;
        let high = self
            .divide(&Self::sub(&r, h), k)?
            .ok_or_else(|| SemigroupError::Internal("lcm offset".into()))?;
        let low_c = self.element(to_i64(&low)?, k - n);
        let high_c = self.element(to_i64(&high)?, 0);
        let (left_complement, right_complement) = if swap {
            (high_c, low_c)
        } else {
            (low_c, high_c)
        };
        Ok(LcmOutcome::Lcm {
            lcm: self.element(r, k),
            left_complement,
            right_complement,
        })
    }

    fn left_divide(
        &self,
        t: &SemigroupElement,
        s: &SemigroupElement,
        _depth: u32,
    ) -> Result<Divisibility> {
        let (g, n) = self.parts(t)?;
        let (h, k) = self.parts(s)?;
        if n > k {
            return Ok(Divisibility::NotDivisible);
        }
        Ok(match self.divide(&Self::sub(h, g), n)? {
            Some(x) => Divisibility::Quotient {
                quotient: self.element(to_i64(&x)?, k - n),
            },
            None => Divisibility::NotDivisible,
        })
    }

    fn scale(&self, s: &SemigroupElement) -> Result<ScaleValue> {
        let (_, n) = self.parts(s)?;
        let v = self
            .abs_det
            .checked_pow(n)
            .ok_or(SemigroupError::Overflow("scale"))?;
        Ok(ScaleValue(s.scale_with(|_| v)))
    }

    fn is_core(&self, s: &SemigroupElement) -> Result<bool> {
        Ok(self.parts(s)?.1 == 0)
    }

    fn is_unit(&self, s: &SemigroupElement) -> Result<bool> {
        self.is_core(s)
    }

    fn factor(&self, s: &SemigroupElement) -> Result<Factorization> {
        let (g, n) = self.parts(s)?;
        let r = self.reduce(g, n)?;
        let k = self
            .divide(&Self::sub(g, &r), n)?
            .ok_or_else(|| SemigroupError::Internal("digit reduction".into()))?;
        Ok(Factorization {
            transversal_part: self.element(r, n),
            core_part: self.element(to_i64(&k)?, 0),
        })
    }

    fn transversal(&self, n: u64) -> Result<Vec<SemigroupElement>> {
        let Some(k) = crate::words::exact_log(self.abs_det, n) else {
            return Ok(Vec::new());
        };
        let k = u32::try_from(k).map_err(|_| SemigroupError::Overflow("exponent"))?;
        self.power(k)?
            .1
            .digits()?
            .iter()
            .map(|v| Ok(self.element(to_i64(v)?, k)))
            .collect()
    }

    fn enumerate_core(&self, max_weight: u32) -> Result<Vec<SemigroupElement>> {
        let d = self.dim();
        let mut out = Vec::new();
        for w in 0..=i64::from(max_weight) {
            let mut shell = Vec::new();
            lattice_shell(d, w, &mut Vec::with_capacity(d), &mut shell);
            shell.sort();
            out.extend(shell.into_iter().map(|v| self.element(v, 0)));
        }
        Ok(out)
    }

    fn core_weight(&self, a: &SemigroupElement) -> Result<u32> {
        let (g, n) = self.parts(a)?;
        if n != 0 {
            return Err(SemigroupError::Precondition(
                "core weight of a non-core element".into(),
            ));
        }
        let w: u64 = g.iter().map(|x| x.unsigned_abs()).sum();
        u32::try_from(w).map_err(|_| SemigroupError::Overflow("core weight"))
    }

    fn irreducible_scales(&self) -> Vec<u64> {
        vec![self.abs_det]
    }

    fn generators(&self) -> Vec<SemigroupElement> {
        let d = self.dim();
        let mut out = vec![self.element(vec![0; d], 1)];
        for i in 0..d {
            for sign in [1, -1] {
                let mut e = vec![0; d];
                e[i] = sign;
                out.push(self.element(e, 0));
            }
        }
        out
    }

    fn parse_element(&self, input: &str) -> Result<SemigroupElement> {
        let inner = input
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| parse_error(input, "expected `(m,n)` or `(m1,..,md;n)`"))?;
        let (offset, power) = if self.dim() == 1 {
            inner
                .split_once(',')
                .ok_or_else(|| parse_error(input, "expected `(m,n)`"))?
        } else {
            inner
                .split_once(';')
                .ok_or_else(|| parse_error(input, "expected `(m1,..,md;n)`"))?
        };
        let offset = offset
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| parse_error(input, "bad offset"))
            })
            .collect::<Result<Vec<_>>>()?;
        if offset.len() != self.dim() {
            return Err(parse_error(input, "offset has the wrong dimension"));
        }
        let power = power
            .trim()
            .parse::<u32>()
            .map_err(|_| parse_error(input, "bad exponent"))?;
        Ok(self.element(offset, power))
    }

    fn format_element(&self, s: &SemigroupElement) -> String {
        let Ok((g, n)) = self.parts(s) else {
            return "<foreign>".into();
        };
        let offs: Vec<String> = g.iter().map(i64::to_string).collect();
        let sep = if self.dim() == 1 { ',' } else { ';' };
        format!("({}{sep}{n})", offs.join(","))
    }

    fn closed_forms(&self) -> ClosedForms {
        let action = match self.has_unit_factor() {
            Ok(Some(false)) => {
                Some(Certificate::holds("the characteristic polynomial has no unit factor, so the A^n Z^d meet in 0"))
            }
            Ok(Some(true)) => Some(Certificate::fails(
                "a unit factor of the characteristic polynomial gives an A-invariant sublattice in every A^n Z^d",
                None,
            )),
            _ => None,
        };
        let propagation = (self.dim() == 1)
            .then(|| Certificate::holds("c((g,0)(r,n)) has absolute value at most |g|/|a|^n + 1"));
        ClosedForms {
            faithful: action.clone(),
            almost_free: action,
            finite_propagation: propagation,
        }
    }
}

/// All vectors of length `d` with l1 norm exactly `w`.
fn lattice_shell(d: usize, w: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() + 1 == d {
        for x in if w == 0 { vec![0] } else { vec![-w, w] } {
            prefix.push(x);
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    for x in -w..=w {
        prefix.push(x);
        lattice_shell(d, w - x.abs(), prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_shells_have_expected_sizes() {
        let z2 = Dilation::new(2, &[vec![1, 1], vec![-1, 1]]).unwrap();
        let core = z2.enumerate_core(2).unwrap();
        // 1 + 4 + 8
        assert_eq!(core.len(), 13);
        assert_eq!(core[0], z2.identity());
    }

    #[test]
    fn unit_factor_detection() {
        let twice = Dilation::new(1, &[vec![2]]).unwrap();
        assert_eq!(twice.has_unit_factor().unwrap(), Some(false));
        let mixed = Dilation::new(2, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(mixed.has_unit_factor().unwrap(), Some(true));
        let rot = Dilation::new(2, &[vec![1, 1], vec![-1, 1]]).unwrap();
        assert_eq!(rot.has_unit_factor().unwrap(), Some(false));
        let block = Dilation::new(3, &[vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 3]]).unwrap();
        assert_eq!(block.has_unit_factor().unwrap(), Some(true));
    }

    #[test]
    fn rejects_small_determinant() {
        assert!(Dilation::new(1, &[vec![1]]).is_err());
        assert!(Dilation::new(2, &[vec![1, 0], vec![0, -1]]).is_err());
        assert!(Dilation::new(2, &[vec![1, 0]]).is_err());
    }
}
