//! `N x| P` for a free abelian `P` generated by pairwise coprime integers.

use rlcm_core::{
    Certificate, ClosedForms, Divisibility, Factorization, FamilyKind, FamilyTag, LcmOutcome,
    Payload, Result, RightLcmSemigroup, ScaleValue, SemigroupElement, SemigroupError,
};

use crate::spec::BuildError;
use crate::words::parse_error;

#[derive(Debug, Clone)]
pub struct NSemidirectP {
    primes: Vec<u64>,
    tag: FamilyTag,
}

pub(crate) fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Extended Euclid on signed values: `(g, x, y)` with `a x + b y = g`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Least `x >= floor` with `x ≡ m (mod p)` and `x ≡ n (mod q)`, if any.
pub(crate) fn crt(m: u64, p: u64, n: u64, q: u64, floor: u64) -> Option<u128> {
    let (g, u, _) = ext_gcd(i128::from(p), i128::from(q));
    let diff = i128::from(n) - i128::from(m);
    if diff.rem_euclid(g) != 0 {
        return None;
    }
    let qg = i128::from(q) / g;
    let l = i128::from(p) * qg;
    let k = ((diff / g).rem_euclid(qg) * u.rem_euclid(qg)).rem_euclid(qg);
    let x0 = (i128::from(m) + i128::from(p) * k).rem_euclid(l);
    let floor = i128::from(floor);
    let x = if x0 >= floor {
        x0
    } else {
        x0 + (floor - x0 + l - 1) / l * l
    };
    Some(x as u128)
}

impl NSemidirectP {
    pub fn new(primes: &[u64]) -> std::result::Result<Self, BuildError> {
        if primes.is_empty() {
            return Err(BuildError::invalid("primes", "at least one generator"));
        }
        if let Some(p) = primes.iter().find(|p| **p < 2) {
            return Err(BuildError::invalid(
                "primes",
                format!("every generator >= 2, got {p}"),
            ));
        }
        for (i, p) in primes.iter().enumerate() {
            for q in &primes[i + 1..] {
                if gcd(u128::from(*p), u128::from(*q)) != 1 {
                    return Err(BuildError::invalid(
                        "primes",
                        format!("pairwise coprime, but gcd({p},{q}) > 1"),
                    ));
                }
            }
        }
        let mut primes = primes.to_vec();
        primes.sort_unstable();
        let params: Vec<String> = primes.iter().map(u64::to_string).collect();
        Ok(NSemidirectP {
            tag: FamilyTag::new(FamilyKind::NSemidirectP, &params.join(",")),
            primes,
        })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn element(&self, m: u64, p: u64) -> SemigroupElement {
        SemigroupElement::with_scale(self.tag, Payload::Shift { m, p }, p)
    }

    /// Whether `p` lies in the monoid generated by the primes.
    pub fn in_p(&self, mut p: u64) -> bool {
        if p == 0 {
            return false;
        }
        for &g in &self.primes {
            while p % g == 0 {
                p /= g;
            }
        }
        p == 1
    }

    pub(crate) fn parts(&self, s: &SemigroupElement) -> Result<(u64, u64)> {
        self.check_tag(s)?;
        match s.payload() {
            Payload::Shift { m, p } => Ok((*m, *p)),
            other => Err(SemigroupError::MalformedElement(format!(
                "expected a shift payload, got {other:?}"
            ))),
        }
    }
}

impl RightLcmSemigroup for NSemidirectP {
    fn tag(&self) -> FamilyTag {
        self.tag
    }

    fn name(&self) -> String {
        let gens: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        format!("N x| <{}>", gens.join(","))
    }

    fn identity(&self) -> SemigroupElement {
        self.element(0, 1)
    }

    fn multiply(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<SemigroupElement> {
        let (m, p) = self.parts(s)?;
        let (n, q) = self.parts(t)?;
        let m2 = p
            .checked_mul(n)
            .and_then(|x| x.checked_add(m))
            .ok_or(SemigroupError::Overflow("shift"))?;
        let p2 = p.checked_mul(q).ok_or(SemigroupError::Overflow("scale"))?;
        Ok(self.element(m2, p2))
    }

    fn right_lcm(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<LcmOutcome> {
        let (m, p) = self.parts(s)?;
        let (n, q) = self.parts(t)?;
        let Some(x) = crt(m, p, n, q, m.max(n)) else {
            return Ok(LcmOutcome::Disjoint);
        };
        let l = u128::from(p) / gcd(u128::from(p), u128::from(q)) * u128::from(q);
        let x = u64::try_from(x).map_err(|_| SemigroupError::Overflow("lcm shift"))?;
        let l = u64::try_from(l).map_err(|_| SemigroupError::Overflow("lcm scale"))?;
        Ok(LcmOutcome::Lcm {
            lcm: self.element(x, l),
            left_complement: self.element((x - m) / p, l / p),
            right_complement: self.element((x - n) / q, l / q),
        })
    }

    fn left_divide(
        &self,
        t: &SemigroupElement,
        s: &SemigroupElement,
        _depth: u32,
    ) -> Result<Divisibility> {
        let (m, p) = self.parts(t)?;
        let (n, q) = self.parts(s)?;
        if q % p != 0 || n < m || (n - m) % p != 0 {
            return Ok(Divisibility::NotDivisible);
        }
        Ok(Divisibility::Quotient {
            quotient: self.element((n - m) / p, q / p),
        })
    }

    fn scale(&self, s: &SemigroupElement) -> Result<ScaleValue> {
        Ok(ScaleValue(self.parts(s)?.1))
    }

    fn is_unit(&self, s: &SemigroupElement) -> Result<bool> {
        Ok(self.parts(s)? == (0, 1))
    }

    fn factor(&self, s: &SemigroupElement) -> Result<Factorization> {
        let (m, p) = self.parts(s)?;
        Ok(Factorization {
            transversal_part: self.element(m % p, p),
            core_part: self.element(m / p, 1),
        })
    }

    fn transversal(&self, n: u64) -> Result<Vec<SemigroupElement>> {
        if !self.in_p(n) {
            return Ok(Vec::new());
        }
        Ok((0..n).map(|m| self.element(m, n)).collect())
    }

    fn enumerate_core(&self, max_weight: u32) -> Result<Vec<SemigroupElement>> {
        Ok((0..=u64::from(max_weight))
            .map(|k| self.element(k, 1))
            .collect())
    }

    fn core_weight(&self, a: &SemigroupElement) -> Result<u32> {
        let (m, p) = self.parts(a)?;
        if p != 1 {
            return Err(SemigroupError::Precondition(
                "core weight of a non-core element".into(),
            ));
        }
        u32::try_from(m).map_err(|_| SemigroupError::Overflow("core weight"))
    }

    fn irreducible_scales(&self) -> Vec<u64> {
        self.primes.clone()
    }

    fn generators(&self) -> Vec<SemigroupElement> {
        let mut g: Vec<_> = self.primes.iter().map(|p| self.element(0, *p)).collect();
        g.push(self.element(1, 1));
        g
    }

    fn parse_element(&self, input: &str) -> Result<SemigroupElement> {
        let inner = input
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| parse_error(input, "expected `(m,p)`"))?;
        let (m, p) = inner
            .split_once(',')
            .ok_or_else(|| parse_error(input, "expected `(m,p)`"))?;
        let m: u64 = m.trim().parse().map_err(|_| parse_error(input, "bad m"))?;
        let p: u64 = p.trim().parse().map_err(|_| parse_error(input, "bad p"))?;
        if !self.in_p(p) {
            return Err(parse_error(input, "p is not in the generated monoid"));
        }
        Ok(self.element(m, p))
    }

    fn format_element(&self, s: &SemigroupElement) -> String {
        match self.parts(s) {
            Ok((m, p)) => format!("({m},{p})"),
            Err(_) => "<foreign>".into(),
        }
    }

    fn closed_forms(&self) -> ClosedForms {
        ClosedForms {
            faithful: Some(Certificate::holds(
                "(k,1) moves (0,p) whenever p does not divide k",
            )),
            almost_free: Some(Certificate::holds(
                "(k,1) and (l,1) agree on (r,p) only when p divides k - l",
            )),
            finite_propagation: Some(Certificate::holds(
                "c((k,1)(r,p)) = ((k + r) div p, 1) has weight at most k",
            )),
        }
    }
}
