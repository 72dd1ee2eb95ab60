//! `F_q[t] x|_f N`: the additive group of polynomials with multiplication by a
//! monic `f` as the shift.

use rlcm_core::{
    Certificate, ClosedForms, Divisibility, Factorization, FamilyKind, FamilyTag, LcmOutcome,
    Payload, Result, RightLcmSemigroup, ScaleValue, SemigroupElement, SemigroupError,
};

use crate::gf::{poly, prime_power, Field, MAX_ORDER};
use crate::spec::BuildError;
use crate::words::parse_error;
use crate::AdsCondition;

#[derive(Debug, Clone)]
pub struct FiniteFieldShift {
    field: Field,
    f: Vec<u32>,
    tag: FamilyTag,
}

impl FiniteFieldShift {
    pub fn new(q: u32, f_degree: u32, f: Option<&[u32]>) -> std::result::Result<Self, BuildError> {
        if prime_power(q).is_none() {
            return Err(BuildError::invalid("q", "a prime power"));
        }
        let field = Field::new(q)
            .ok_or_else(|| BuildError::invalid("q", format!("at most {MAX_ORDER}")))?;
        if f_degree == 0 {
            return Err(BuildError::invalid("f_degree", "f_degree >= 1"));
        }
        let f = match f {
            Some(c) => {
                if c.len() != f_degree as usize + 1 || c.last() != Some(&1) {
                    return Err(BuildError::invalid(
                        "f",
                        format!("monic of degree {f_degree}"),
                    ));
                }
                if c.iter().any(|x| *x >= q) {
                    return Err(BuildError::invalid("f", "coefficients below q"));
                }
                c.to_vec()
            }
            None => {
                let mut c = vec![0; f_degree as usize];
                c.push(1);
                c
            }
        };
        let tag = FamilyTag::new(FamilyKind::FiniteFieldShift, &format!("{q};{f:?}"));
        Ok(FiniteFieldShift { field, f, tag })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn shift(&self) -> &[u32] {
        &self.f
    }

    fn degree(&self) -> u32 {
        (self.f.len() - 1) as u32
    }

    pub fn element(&self, coeffs: Vec<u32>, power: u32) -> SemigroupElement {
        SemigroupElement::new(
            self.tag,
            Payload::Polynomial {
                coeffs: poly::trim(coeffs),
                power,
            },
        )
    }

    fn parts<'a>(&self, s: &'a SemigroupElement) -> Result<(&'a [u32], u32)> {
        self.check_tag(s)?;
        match s.payload() {
            Payload::Polynomial { coeffs, power } => Ok((coeffs, *power)),
            other => Err(SemigroupError::MalformedElement(format!(
                "expected a polynomial payload, got {other:?}"
            ))),
        }
    }

    fn f_pow(&self, n: u32) -> Vec<u32> {
        (0..n).fold(vec![1], |acc, _| poly::mul(&self.field, &acc, &self.f))
    }

    fn divide(&self, v: &[u32], n: u32) -> Option<Vec<u32>> {
        let (q, r) = poly::divrem(&self.field, v, &self.f_pow(n));
        r.is_empty().then_some(q)
    }

    fn reduce(&self, v: &[u32], n: u32) -> Vec<u32> {
        poly::divrem(&self.field, v, &self.f_pow(n)).1
    }

    pub fn ideal_test(&self, g: &[u32], n: u32, h: &[u32], m: u32) -> Result<LcmOutcome> {
        self.right_lcm(&self.element(g.to_vec(), n), &self.element(h.to_vec(), m))
    }

    pub fn ads_conditions(&self) -> Vec<AdsCondition> {
        let idx = format!("{}^{}", self.field.order(), self.degree());
        vec![
            AdsCondition::new(
                "finite-index",
                true,
                format!("[F_q[t] : f^n F_q[t]] = ({idx})^n"),
            ),
            AdsCondition::new(
                "non-automorphism",
                true,
                "deg f >= 1, so multiplication by f is not onto",
            ),
            AdsCondition::new("units", true, "S* = F_q[t] x {0}"),
            AdsCondition::new(
                "equal-index-conjugate",
                true,
                "equal index forces equal exponent in N",
            ),
        ]
    }
}

impl RightLcmSemigroup for FiniteFieldShift {
    fn tag(&self) -> FamilyTag {
        self.tag
    }

    fn name(&self) -> String {
        format!(
            "F_{}[t] x|_f N (deg f = {})",
            self.field.order(),
            self.degree()
        )
    }

    fn identity(&self) -> SemigroupElement {
        self.element(Vec::new(), 0)
    }

    fn multiply(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<SemigroupElement> {
        let (g, n) = self.parts(s)?;
        let (h, m) = self.parts(t)?;
        let moved = poly::mul(&self.field, &self.f_pow(n), h);
        let power = n
            .checked_add(m)
            .ok_or(SemigroupError::Overflow("exponent"))?;
        Ok(self.element(poly::add(&self.field, g, &moved), power))
    }

    fn right_lcm(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<LcmOutcome> {
        let (g, n) = self.parts(s)?;
        let (h, m) = self.parts(t)?;
        let swap = n > m;
        let ((g, n), (h, m)) = if swap {
            ((h, m), (g, n))
        } else {
            ((g, n), (h, m))
        };
        if self.divide(&poly::sub(&self.field, h, g), n).is_none() {
            return Ok(LcmOutcome::Disjoint);
        }
        let r = self.reduce(h, m);
        let internal = || SemigroupError::Internal("lcm offset".into());
        let low = self
            .divide(&poly::sub(&self.field, &r, g), n)
            .ok_or_else(internal)?;
        let high = self
            .divide(&poly::sub(&self.field, &r, h), m)
            .ok_or_else(internal)?;
        let low_c = self.element(low, m - n);
        let high_c = self.element(high, 0);
        let (left_complement, right_complement) = if swap {
            (high_c, low_c)
        } else {
            (low_c, high_c)
        };
        Ok(LcmOutcome::Lcm {
            lcm: self.element(r, m),
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
        let (h, m) = self.parts(s)?;
        if n > m {
            return Ok(Divisibility::NotDivisible);
        }
        Ok(match self.divide(&poly::sub(&self.field, h, g), n) {
            Some(x) => Divisibility::Quotient {
                quotient: self.element(x, m - n),
            },
            None => Divisibility::NotDivisible,
        })
    }

    fn scale(&self, s: &SemigroupElement) -> Result<ScaleValue> {
        let (_, n) = self.parts(s)?;
        let v = n
            .checked_mul(self.degree())
            .and_then(|e| u64::from(self.field.order()).checked_pow(e))
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
        let (q, r) = poly::divrem(&self.field, g, &self.f_pow(n));
        Ok(Factorization {
            transversal_part: self.element(r, n),
            core_part: self.element(q, 0),
        })
    }

    fn transversal(&self, n: u64) -> Result<Vec<SemigroupElement>> {
        let base = u64::from(self.field.order()).pow(self.degree());
        let Some(k) = crate::words::exact_log(base, n) else {
            return Ok(Vec::new());
        };
        let k = u32::try_from(k).map_err(|_| SemigroupError::Overflow("exponent"))?;
        Ok((0..u128::from(n))
            .map(|v| self.element(poly::from_value(&self.field, v), k))
            .collect())
    }

    fn enumerate_core(&self, max_weight: u32) -> Result<Vec<SemigroupElement>> {
        let count = u64::from(self.field.order())
            .checked_pow(max_weight)
            .ok_or(SemigroupError::Overflow("core enumeration"))?;
        Ok((0..u128::from(count))
            .map(|v| self.element(poly::from_value(&self.field, v), 0))
            .collect())
    }

    fn core_weight(&self, a: &SemigroupElement) -> Result<u32> {
        let (g, n) = self.parts(a)?;
        if n != 0 {
            return Err(SemigroupError::Precondition(
                "core weight of a non-core element".into(),
            ));
        }
        Ok(g.len() as u32)
    }

    fn irreducible_scales(&self) -> Vec<u64> {
        vec![u64::from(self.field.order()).pow(self.degree())]
    }

    fn generators(&self) -> Vec<SemigroupElement> {
        let mut out = vec![self.element(Vec::new(), 1), self.element(vec![0, 1], 0)];
        out.extend(
            self.field
                .additive_basis()
                .into_iter()
                .map(|b| self.element(vec![b], 0)),
        );
        out
    }

    fn parse_element(&self, input: &str) -> Result<SemigroupElement> {
        let inner = input
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| parse_error(input, "expected `(c0 c1 ..; n)`"))?;
        let (coeffs, power) = inner
            .split_once(';')
            .ok_or_else(|| parse_error(input, "expected `(c0 c1 ..; n)`"))?;
        let coeffs = coeffs
            .split_whitespace()
            .map(|c| match c.parse::<u32>() {
                Ok(x) if x < self.field.order() => Ok(x),
                _ => Err(parse_error(input, "coefficient outside the field")),
            })
            .collect::<Result<Vec<_>>>()?;
        let power = power
            .trim()
            .parse::<u32>()
            .map_err(|_| parse_error(input, "bad exponent"))?;
        Ok(self.element(coeffs, power))
    }

    fn format_element(&self, s: &SemigroupElement) -> String {
        let Ok((g, n)) = self.parts(s) else {
            return "<foreign>".into();
        };
        let cs: Vec<String> = g.iter().map(u32::to_string).collect();
        let body = if cs.is_empty() {
            "0".to_string()
        } else {
            cs.join(" ")
        };
        format!("({body}; {n})")
    }

    fn closed_forms(&self) -> ClosedForms {
        ClosedForms {
            faithful: Some(Certificate::holds(
                "only 0 is divisible by every power of f",
            )),
            almost_free: Some(Certificate::holds(
                "(k,0) and (l,0) agree on level n only when f^n divides k - l",
            )),
            finite_propagation: Some(Certificate::holds(
                "c((k,0)(r,n)) = (k + r) div f^n has degree below deg k",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_by_t_over_gf2() {
        let s = FiniteFieldShift::new(2, 1, None).unwrap();
        let x = s.parse_element("(1 1; 1)").unwrap();
        let y = s.parse_element("(1; 0)").unwrap();
        // (1 + t, 1)(1, 0) = (1 + t + t, 1) = (1, 1)
        assert_eq!(
            s.multiply(&x, &y).unwrap(),
            s.parse_element("(1; 1)").unwrap()
        );
        assert_eq!(s.transversal(4).unwrap().len(), 4);
        assert_eq!(s.format_element(&s.identity()), "(0; 0)");
    }

    #[test]
    fn parameters_are_validated() {
        assert!(FiniteFieldShift::new(6, 1, None).is_err());
        assert!(FiniteFieldShift::new(2, 0, None).is_err());
        assert!(FiniteFieldShift::new(3, 2, Some(&[1, 0, 2])).is_err());
        assert!(FiniteFieldShift::new(3, 2, Some(&[1, 0, 1])).is_ok());
    }
}
