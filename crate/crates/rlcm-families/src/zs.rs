//! Zappa-Szep products `U ⋈ A` of a free monoid `U` with a free abelian `A`,
//! given by an action table and a restriction table on letters.

use rlcm_core::{
    Divisibility, Factorization, FamilyKind, FamilyTag, LcmOutcome, Payload, Result,
    RightLcmSemigroup, ScaleValue, SemigroupElement, SemigroupError,
};

use crate::free::compositions;
use crate::spec::{BuildError, FamilySpec};
use crate::words::{all_words, checked_pow, exact_log, indexed_tokens, parse_error, word_parts};

#[derive(Debug, Clone)]
pub struct ZappaSzep {
    m: u32,
    n: usize,
    action: Vec<Vec<u32>>,
    restriction: Vec<Vec<Vec<u64>>>,
    tag: FamilyTag,
}

fn add_into(acc: &mut [u64], v: &[u64], times: u64) -> Result<()> {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = x
            .checked_mul(times)
            .and_then(|y| a.checked_add(y))
            .ok_or(SemigroupError::Overflow("restriction"))?;
    }
    Ok(())
}

impl ZappaSzep {
    pub fn new(
        u: &FamilySpec,
        a: &FamilySpec,
        action: &[Vec<u32>],
        restriction: &[Vec<Vec<u64>>],
    ) -> std::result::Result<Self, BuildError> {
        let m = match u {
            FamilySpec::FreeMonoid { m } if *m >= 2 => *m,
            FamilySpec::FreeMonoid { .. } => return Err(BuildError::invalid("u.m", "m >= 2")),
            other => {
                return Err(BuildError::Unsupported(format!(
                    "U must be a free monoid, got {}",
                    kind_name(other)
                )))
            }
        };
        let n = match a {
            FamilySpec::FreeAbelian { rank } if *rank >= 1 => *rank as usize,
            FamilySpec::EasyArtin { m: 0, n } if *n >= 1 => *n as usize,
            FamilySpec::FreeMonoid { m } => {
                return Err(BuildError::NotLeftReversible(format!(
                    "the free monoid on {m} letters has x0 A ∩ x1 A empty"
                )))
            }
            FamilySpec::EasyArtin { m, .. } => {
                return Err(BuildError::NotLeftReversible(format!(
                    "F{m}+ x N^n has x0 A ∩ x1 A empty"
                )))
            }
            other => {
                return Err(BuildError::Unsupported(format!(
                    "A must be free abelian, got {}",
                    kind_name(other)
                )))
            }
        };
        if action.len() != n {
            return Err(BuildError::IncompleteTable(format!(
                "action needs {n} rows, got {}",
                action.len()
            )));
        }
        if restriction.len() != n {
            return Err(BuildError::IncompleteTable(format!(
                "restriction needs {n} rows, got {}",
                restriction.len()
            )));
        }
        for (i, row) in action.iter().enumerate() {
            if row.len() != m as usize {
                return Err(BuildError::IncompleteTable(format!(
                    "action row {i} needs {m} entries"
                )));
            }
            let mut seen = vec![false; m as usize];
            for &y in row {
                if y >= m || std::mem::replace(&mut seen[y as usize], true) {
                    return Err(BuildError::invalid(
                        "action",
                        format!("row {i} is not a permutation of the letters"),
                    ));
                }
            }
        }
        for (i, row) in restriction.iter().enumerate() {
            if row.len() != m as usize || row.iter().any(|v| v.len() != n) {
                return Err(BuildError::IncompleteTable(format!(
                    "restriction row {i} needs {m} vectors of length {n}"
                )));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for x in 0..m as usize {
                    let ij = action[i][action[j][x] as usize];
                    let ji = action[j][action[i][x] as usize];
                    let rij: Vec<u64> = (0..n)
                        .map(|k| restriction[i][action[j][x] as usize][k] + restriction[j][x][k])
                        .collect();
                    let rji: Vec<u64> = (0..n)
                        .map(|k| restriction[j][action[i][x] as usize][k] + restriction[i][x][k])
                        .collect();
                    if ij != ji || rij != rji {
                        return Err(BuildError::invalid(
                            "action",
                            format!("generators {i} and {j} do not commute on letter {x}"),
                        ));
                    }
                }
            }
        }
        let tag = FamilyTag::new(
            FamilyKind::ZappaSzep,
            &format!("{m};{action:?};{restriction:?}"),
        );
        Ok(ZappaSzep {
            m,
            n,
            action: action.to_vec(),
            restriction: restriction.to_vec(),
            tag,
        })
    }

    pub fn element(&self, letters: Vec<u32>, exponents: Vec<u64>) -> SemigroupElement {
        SemigroupElement::new(self.tag, Payload::Word { letters, exponents })
    }

    fn parts<'a>(&self, s: &'a SemigroupElement) -> Result<(&'a [u32], &'a [u64])> {
        self.check_tag(s)?;
        let (w, e) = word_parts(s)?;
        if e.len() != self.n {
            return Err(SemigroupError::MalformedElement(format!(
                "expected {} exponents",
                self.n
            )));
        }
        Ok((w, e))
    }

    /// `z_i^k(x)` and `z_i^k|_x`, using the cycle of `x` under `z_i`.
    fn generator_power(&self, i: usize, k: u64, x: u32, acc: &mut [u64]) -> Result<u32> {
        let perm = &self.action[i];
        let mut cycle = vec![x];
        let mut y = perm[x as usize];
        while y != x {
            cycle.push(y);
            y = perm[y as usize];
        }
        let len = cycle.len() as u64;
        let (full, rest) = (k / len, (k % len) as usize);
        if full > 0 {
            for &c in &cycle {
                add_into(acc, &self.restriction[i][c as usize], full)?;
            }
        }
        for &c in &cycle[..rest] {
            add_into(acc, &self.restriction[i][c as usize], 1)?;
        }
        Ok(cycle[rest])
    }

    /// `a(x)` and `a|_x` for a single letter.
    fn act_letter(&self, a: &[u64], x: u32) -> Result<(u32, Vec<u64>)> {
        let mut acc = vec![0u64; self.n];
        let mut y = x;
        for i in (0..self.n).rev() {
            y = self.generator_power(i, a[i], y, &mut acc)?;
        }
        Ok((y, acc))
    }

    /// `a(u)` and `a|_u`.
    pub fn act(&self, a: &[u64], u: &[u32]) -> Result<(Vec<u32>, Vec<u64>)> {
        let mut cur = a.to_vec();
        let mut out = Vec::with_capacity(u.len());
        for &x in u {
            let (y, r) = self.act_letter(&cur, x)?;
            out.push(y);
            cur = r;
        }
        Ok((out, cur))
    }

    /// `x` with `a(x) = w`, and `a|_x`.
    pub fn act_inverse(&self, a: &[u64], w: &[u32]) -> Result<(Vec<u32>, Vec<u64>)> {
        let mut cur = a.to_vec();
        let mut out = Vec::with_capacity(w.len());
        for &y in w {
            let mut found = None;
            for x in 0..self.m {
                let (img, r) = self.act_letter(&cur, x)?;
                if img == y {
                    found = Some((x, r));
                    break;
                }
            }
            let (x, r) = found
                .ok_or_else(|| SemigroupError::Internal("action is not onto the letters".into()))?;
            out.push(x);
            cur = r;
        }
        Ok((out, cur))
    }

    fn verify(
        &self,
        lcm: &SemigroupElement,
        s: &SemigroupElement,
        sc: &SemigroupElement,
    ) -> Result<()> {
        if self.multiply(s, sc)? != *lcm {
            return Err(SemigroupError::Internal(format!(
                "zappa-szep lcm check failed: {} * {} != {}",
                self.format_element(s),
                self.format_element(sc),
                self.format_element(lcm)
            )));
        }
        Ok(())
    }
}

fn kind_name(spec: &FamilySpec) -> &'static str {
    match spec {
        FamilySpec::FreeMonoid { .. } => "free-monoid",
        FamilySpec::EasyArtin { .. } => "easy-artin",
        FamilySpec::FreeAbelian { .. } => "free-abelian",
        FamilySpec::BaumslagSolitar { .. } => "baumslag-solitar",
        FamilySpec::NSemidirectP { .. } => "n-semidirect-p",
        FamilySpec::SelfSimilar { .. } => "self-similar",
        FamilySpec::DilationMatrix { .. } => "dilation-matrix",
        FamilySpec::FiniteFieldShift { .. } => "finite-field-shift",
        FamilySpec::ZappaSzep { .. } => "zappa-szep",
    }
}

impl RightLcmSemigroup for ZappaSzep {
    fn tag(&self) -> FamilyTag {
        self.tag
    }

    fn name(&self) -> String {
        format!("F{}+ ⋈ N^{}", self.m, self.n)
    }

    fn identity(&self) -> SemigroupElement {
        self.element(Vec::new(), vec![0; self.n])
    }

    fn multiply(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<SemigroupElement> {
        let (u, a) = self.parts(s)?;
        let (v, b) = self.parts(t)?;
        let (av, mut r) = self.act(a, v)?;
        add_into(&mut r, b, 1)?;
        let mut letters = u.to_vec();
        letters.extend(av);
        Ok(self.element(letters, r))
    }

    fn right_lcm(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<LcmOutcome> {
        let (u, a) = self.parts(s)?;
        let (v, b) = self.parts(t)?;
        let swap = u.len() > v.len();
        let (short, short_e, long, long_e) = if swap { (v, b, u, a) } else { (u, a, v, b) };
        if !long.starts_with(short) {
            return Ok(LcmOutcome::Disjoint);
        }
        let (x, r) = self.act_inverse(short_e, &long[short.len()..])?;
        let top: Vec<u64> = r.iter().zip(long_e).map(|(p, q)| *p.max(q)).collect();
        let lcm = self.element(long.to_vec(), top.clone());
        let short_c = self.element(x, top.iter().zip(&r).map(|(t, p)| t - p).collect());
        let long_c = self.element(
            Vec::new(),
            top.iter().zip(long_e).map(|(t, q)| t - q).collect(),
        );
        let (left_complement, right_complement) = if swap {
            (long_c, short_c)
        } else {
            (short_c, long_c)
        };
        self.verify(&lcm, s, &left_complement)?;
        self.verify(&lcm, t, &right_complement)?;
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
        let (u, a) = self.parts(t)?;
        let (v, b) = self.parts(s)?;
        if !v.starts_with(u) {
            return Ok(Divisibility::NotDivisible);
        }
        let (x, r) = self.act_inverse(a, &v[u.len()..])?;
        if r.iter().zip(b).any(|(p, q)| p > q) {
            return Ok(Divisibility::NotDivisible);
        }
        Ok(Divisibility::Quotient {
            quotient: self.element(x, b.iter().zip(&r).map(|(q, p)| q - p).collect()),
        })
    }

    fn scale(&self, s: &SemigroupElement) -> Result<ScaleValue> {
        let (w, _) = self.parts(s)?;
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
            transversal_part: self.element(w.to_vec(), vec![0; self.n]),
            core_part: self.element(Vec::new(), e.to_vec()),
        })
    }

    fn transversal(&self, n: u64) -> Result<Vec<SemigroupElement>> {
        let Some(k) = exact_log(u64::from(self.m), n) else {
            return Ok(Vec::new());
        };
        Ok(all_words(self.m, k)
            .into_iter()
            .map(|w| self.element(w, vec![0; self.n]))
            .collect())
    }

    fn enumerate_core(&self, max_weight: u32) -> Result<Vec<SemigroupElement>> {
        let mut out = Vec::new();
        for total in 0..=u64::from(max_weight) {
            let mut vs = Vec::new();
            compositions(self.n, total, &mut Vec::new(), &mut vs);
            out.extend(vs.into_iter().map(|e| self.element(Vec::new(), e)));
        }
        Ok(out)
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
        vec![u64::from(self.m)]
    }

    fn generators(&self) -> Vec<SemigroupElement> {
        let letters = (0..self.m).map(|x| self.element(vec![x], vec![0; self.n]));
        let core = (0..self.n).map(|j| {
            let mut e = vec![0; self.n];
            e[j] = 1;
            self.element(Vec::new(), e)
        });
        letters.chain(core).collect()
    }

    fn parse_element(&self, input: &str) -> Result<SemigroupElement> {
        let mut acc = self.identity();
        for (name, idx, exp) in indexed_tokens(input)? {
            let g = match name {
                'x' if idx < self.m => self.element(vec![idx], vec![0; self.n]),
                'z' if (idx as usize) < self.n => {
                    let mut e = vec![0; self.n];
                    e[idx as usize] = exp;
                    self.element(Vec::new(), e)
                }
                _ => {
                    return Err(parse_error(
                        input,
                        &format!("unknown generator `{name}{idx}`"),
                    ))
                }
            };
            let times = if name == 'z' { 1 } else { exp };
            for _ in 0..times {
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
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(c: u64, d: u64) -> ZappaSzep {
        match FamilySpec::baumslag_solitar_as_zappa_szep(c, d) {
            FamilySpec::ZappaSzep {
                u,
                a,
                action,
                restriction,
            } => ZappaSzep::new(&u, &a, &action, &restriction).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn cycle_shortcut_matches_stepping() {
        let z = bs(2, 3);
        for k in 0..20u64 {
            for x in 0..3 {
                let (y, r) = z.act_letter(&[k], x).unwrap();
                let mut cur = (x, 0u64);
                for _ in 0..k {
                    let add = z.restriction[0][cur.0 as usize][0];
                    cur = (z.action[0][cur.0 as usize], cur.1 + add);
                }
                assert_eq!((y, r[0]), cur);
            }
        }
    }

    #[test]
    fn free_monoid_factor_is_refused() {
        let err = ZappaSzep::new(
            &FamilySpec::FreeMonoid { m: 2 },
            &FamilySpec::FreeMonoid { m: 2 },
            &[vec![0, 1]],
            &[vec![vec![0], vec![0]]],
        )
        .unwrap_err();
        assert!(matches!(err, BuildError::NotLeftReversible(_)));
    }

    #[test]
    fn incomplete_tables_are_refused() {
        let err = ZappaSzep::new(
            &FamilySpec::FreeMonoid { m: 2 },
            &FamilySpec::FreeAbelian { rank: 1 },
            &[vec![1, 0]],
            &[vec![vec![0]]],
        )
        .unwrap_err();
        assert!(matches!(err, BuildError::IncompleteTable(_)));
    }

    #[test]
    fn non_commuting_generators_are_refused() {
        let err = ZappaSzep::new(
            &FamilySpec::FreeMonoid { m: 3 },
            &FamilySpec::FreeAbelian { rank: 2 },
            &[vec![1, 0, 2], vec![0, 2, 1]],
            &[vec![vec![0, 0]; 3], vec![vec![0, 0]; 3]],
        )
        .unwrap_err();
        assert!(matches!(err, BuildError::Invalid { .. }));
    }
}
