//! Baumslag-Solitar monoids `BS(c,d)+ = <a, b | a b^c = b^d a>`.
//!
//! Normal form: a word over the digits `0..d` (digit `j` stands for `b^j a`)
//! followed by a power of `b`.

use rlcm_core::{
    Certificate, ClosedForms, Divisibility, Factorization, FamilyKind, FamilyTag, LcmOutcome,
    Level, Payload, Result, RightLcmSemigroup, ScaleValue, SemigroupElement, SemigroupError,
};

use crate::spec::BuildError;
use crate::words::{all_words, checked_pow, exact_log, parse_error, word_parts};

#[derive(Debug, Clone)]
pub struct BaumslagSolitar {
    c: u64,
    d: u64,
    tag: FamilyTag,
}

impl BaumslagSolitar {
    pub fn new(c: u64, d: u64) -> std::result::Result<Self, BuildError> {
        if c < 1 {
            return Err(BuildError::invalid("c", "c >= 1"));
        }
        if d < 1 {
            return Err(BuildError::invalid("d", "d >= 1"));
        }
        if c.checked_mul(d).map_or(true, |p| p <= 1) {
            return Err(BuildError::invalid("c,d", "c*d > 1"));
        }
        if d > u64::from(u32::MAX) {
            return Err(BuildError::invalid("d", "d fits in 32 bits"));
        }
        Ok(BaumslagSolitar {
            c,
            d,
            tag: FamilyTag::new(FamilyKind::BaumslagSolitar, &format!("{c},{d}")),
        })
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn element(&self, digits: Vec<u32>, b_power: u64) -> SemigroupElement {
        SemigroupElement::new(
            self.tag,
            Payload::Word {
                letters: digits,
                exponents: vec![b_power],
            },
        )
    }

    pub fn a(&self) -> SemigroupElement {
        self.element(vec![0], 0)
    }

    pub fn b_pow(&self, k: u64) -> SemigroupElement {
        self.element(Vec::new(), k)
    }

    fn parts<'a>(&self, s: &'a SemigroupElement) -> Result<(&'a [u32], u64)> {
        self.check_tag(s)?;
        let (letters, exps) = word_parts(s)?;
        match exps {
            [e] => Ok((letters, *e)),
            _ => Err(SemigroupError::MalformedElement(
                "expected one b-exponent".into(),
            )),
        }
    }

    /// Rewrites `b^m * w` as `w' * b^n`, returning `(w', n)`.
    pub fn push(&self, m: u64, word: &[u32]) -> Result<(Vec<u32>, u64)> {
        let mut carry = m;
        let mut out = Vec::with_capacity(word.len());
        for &i in word {
            let total = carry
                .checked_add(u64::from(i))
                .ok_or(SemigroupError::Overflow("b-power push"))?;
            out.push((total % self.d) as u32);
            carry = (total / self.d)
                .checked_mul(self.c)
                .ok_or(SemigroupError::Overflow("b-power push"))?;
        }
        Ok((out, carry))
    }

    /// Finds `x` with `b^m * x = target * b^n`, returning `(x, n)`.
    fn pull(&self, m: u64, target: &[u32]) -> Result<(Vec<u32>, u64)> {
        let mut carry = m;
        let mut out = Vec::with_capacity(target.len());
        for &y in target {
            let i = (u64::from(y) + self.d - carry % self.d) % self.d;
            out.push(i as u32);
            carry = ((carry + i) / self.d)
                .checked_mul(self.c)
                .ok_or(SemigroupError::Overflow("b-power pull"))?;
        }
        Ok((out, carry))
    }
}

impl RightLcmSemigroup for BaumslagSolitar {
    fn tag(&self) -> FamilyTag {
        self.tag
    }

    fn name(&self) -> String {
        format!("BS({},{})+", self.c, self.d)
    }

    fn identity(&self) -> SemigroupElement {
        self.element(Vec::new(), 0)
    }

    fn multiply(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<SemigroupElement> {
        let (w, e) = self.parts(s)?;
        let (v, f) = self.parts(t)?;
        let (pushed, carry) = self.push(e, v)?;
        let mut letters = w.to_vec();
        letters.extend(pushed);
        let power = carry
            .checked_add(f)
            .ok_or(SemigroupError::Overflow("multiply"))?;
        Ok(self.element(letters, power))
    }

    fn right_lcm(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<LcmOutcome> {
        let (w, e) = self.parts(s)?;
        let (v, f) = self.parts(t)?;
        let (swap, short, short_e, long, long_e) = if w.len() <= v.len() {
            (false, w, e, v, f)
        } else {
            (true, v, f, w, e)
        };
        if !long.starts_with(short) {
            return Ok(LcmOutcome::Disjoint);
        }
        let (x, r) = self.pull(short_e, &long[short.len()..])?;
        let top = r.max(long_e);
        let lcm = self.element(long.to_vec(), top);
        let short_c = self.element(x, top - r);
        let long_c = self.element(Vec::new(), top - long_e);
        let (left_complement, right_complement) = if swap {
            (long_c, short_c)
        } else {
            (short_c, long_c)
        };
        Ok(LcmOutcome::Lcm {
            lcm,
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
        let (w, e) = self.parts(t)?;
        let (v, f) = self.parts(s)?;
        if !v.starts_with(w) {
            return Ok(Divisibility::NotDivisible);
        }
        let (x, r) = self.pull(e, &v[w.len()..])?;
        if r > f {
            return Ok(Divisibility::NotDivisible);
        }
        Ok(Divisibility::Quotient {
            quotient: self.element(x, f - r),
        })
    }

    fn scale(&self, s: &SemigroupElement) -> Result<ScaleValue> {
        let (w, _) = self.parts(s)?;
        let d = self.d;
        let len = w.len();
        checked_pow(d, len).map(|n| ScaleValue(s.scale_with(|_| n)))
    }

    fn is_core(&self, s: &SemigroupElement) -> Result<bool> {
        Ok(self.parts(s)?.0.is_empty())
    }

    fn is_unit(&self, s: &SemigroupElement) -> Result<bool> {
        let (w, e) = self.parts(s)?;
        Ok(w.is_empty() && e == 0)
    }

    fn factor(&self, s: &SemigroupElement) -> Result<Factorization> {
        let (w, e) = self.parts(s)?;
        Ok(Factorization {
            transversal_part: self.element(w.to_vec(), 0),
            core_part: self.b_pow(e),
        })
    }

    fn transversal(&self, n: u64) -> Result<Vec<SemigroupElement>> {
        if n == 1 {
            return Ok(vec![self.identity()]);
        }
        let Some(k) = exact_log(self.d, n) else {
            return Ok(Vec::new());
        };
        Ok(all_words(self.d as u32, k)
            .into_iter()
            .map(|w| self.element(w, 0))
            .collect())
    }

    fn enumerate_core(&self, max_weight: u32) -> Result<Vec<SemigroupElement>> {
        Ok((0..=u64::from(max_weight)).map(|k| self.b_pow(k)).collect())
    }

    fn core_weight(&self, a: &SemigroupElement) -> Result<u32> {
        let (w, e) = self.parts(a)?;
        if !w.is_empty() {
            return Err(SemigroupError::Precondition(
                "core weight of a non-core element".into(),
            ));
        }
        u32::try_from(e).map_err(|_| SemigroupError::Overflow("core weight"))
    }

    fn irreducible_scales(&self) -> Vec<u64> {
        if self.d >= 2 {
            vec![self.d]
        } else {
            Vec::new()
        }
    }

    fn generators(&self) -> Vec<SemigroupElement> {
        vec![self.a(), self.b_pow(1)]
    }

    /// For `d = 1` the scale is trivial, so levels are indexed by word length
    /// (lengths 0 to 3), each holding the single word `a^k`.
    fn levels(&self, depth: u64) -> Result<Vec<Level>> {
        if self.d == 1 {
            return Ok((0..=3)
                .map(|k| Level {
                    n: 1,
                    members: vec![self.element(vec![0; k], 0)],
                })
                .collect());
        }
        self.scale_values(depth)
            .into_iter()
            .map(|n| {
                Ok(Level {
                    n,
                    members: self.transversal(n)?,
                })
            })
            .collect()
    }

    fn parse_element(&self, input: &str) -> Result<SemigroupElement> {
        let mut acc = self.identity();
        let chars: Vec<char> = input
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*' && *c != '·')
            .collect();
        let mut i = 0;
        while i < chars.len() {
            match chars[i] {
                '1' if chars.len() == 1 => i += 1,
                'a' => {
                    acc = self.multiply(&acc, &self.a())?;
                    i += 1;
                }
                'b' => {
                    i += 1;
                    let mut k = 1u64;
                    if i < chars.len() && chars[i] == '^' {
                        i += 1;
                        let start = i;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                        let digits: String = chars[start..i].iter().collect();
                        k = digits
                            .parse()
                            .map_err(|_| parse_error(input, "expected exponent after `^`"))?;
                    }
                    acc = self.multiply(&acc, &self.b_pow(k))?;
                }
                other => return Err(parse_error(input, &format!("unexpected `{other}`"))),
            }
        }
        Ok(acc)
    }

    fn format_element(&self, s: &SemigroupElement) -> String {
        let Ok((w, e)) = self.parts(s) else {
            return "<foreign>".into();
        };
        if w.is_empty() && e == 0 {
            return "1".into();
        }
        let mut out = String::new();
        for &j in w {
            match j {
                0 => {}
                1 => out.push('b'),
                _ => out.push_str(&format!("b^{j}")),
            }
            out.push('a');
        }
        match e {
            0 => {}
            1 => out.push('b'),
            _ => out.push_str(&format!("b^{e}")),
        }
        out
    }

    fn closed_forms(&self) -> ClosedForms {
        let divides = self.c % self.d == 0;
        let witness = Some((self.b_pow(self.d), self.identity()));
        let action = if divides {
            Certificate::fails(
                format!(
                    "c = {} lies in {}N, so b^{} acts trivially",
                    self.c, self.d, self.d
                ),
                witness,
            )
        } else {
            Certificate::holds(format!(
                "c = {} is not a multiple of d = {}",
                self.c, self.d
            ))
        };
        let propagation = if self.c <= self.d {
            Certificate::holds(format!("c = {} <= d = {}", self.c, self.d))
        } else {
            Certificate::fails(
                format!(
                    "c = {} > d = {}: restrictions of b^{} grow without bound",
                    self.c, self.d, self.d
                ),
                Some((self.b_pow(self.d), self.identity())),
            )
        };
        ClosedForms {
            faithful: Some(action.clone()),
            almost_free: Some(action),
            finite_propagation: Some(propagation),
        }
    }
}
