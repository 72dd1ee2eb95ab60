//! Self-similar actions `X* ⋈ G` for a group generated by an invertible Mealy automaton.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rlcm_core::{
    Certificate, ClosedForms, Divisibility, Factorization, FamilyKind, FamilyTag, LcmOutcome,
    Machine, Payload, Result, RightLcmSemigroup, ScaleValue, SemigroupElement, SemigroupError,
};

use crate::machine::{all_sections, canonical, compose, inverse, run, section};
use crate::spec::{BuildError, MealyAutomaton};
use crate::words::{all_words, checked_pow, exact_log, parse_error};

const FORMAT_SEARCH_LENGTH: u32 = 8;

#[derive(Debug, Clone)]
pub struct SelfSimilar {
    alphabet: u32,
    names: Vec<String>,
    states: Vec<Arc<Machine>>,
    inverses: Vec<Arc<Machine>>,
    identity: Arc<Machine>,
    cap: usize,
    depth: u32,
    tag: FamilyTag,
}

impl SelfSimilar {
    pub fn new(automaton: &MealyAutomaton) -> std::result::Result<Self, BuildError> {
        let k = automaton.alphabet;
        if k < 2 {
            return Err(BuildError::invalid("alphabet", "at least two letters"));
        }
        if automaton.states.is_empty() {
            return Err(BuildError::invalid("states", "at least one state"));
        }
        if automaton.closure_cap == 0 {
            return Err(BuildError::invalid("closure_cap", "positive"));
        }
        let mut index = HashMap::new();
        for (i, s) in automaton.states.iter().enumerate() {
            if s.name.is_empty()
                || s.name == "1"
                || s.name
                    .contains(|c: char| c.is_whitespace() || "(),^".contains(c))
            {
                return Err(BuildError::invalid(
                    "states",
                    format!("state name `{}` is not a plain identifier", s.name),
                ));
            }
            if index.insert(s.name.clone(), i as u32).is_some() {
                return Err(BuildError::invalid(
                    "states",
                    format!("duplicate state `{}`", s.name),
                ));
            }
        }
        let mut perms = Vec::new();
        let mut next = Vec::new();
        for s in &automaton.states {
            let mut seen = vec![false; k as usize];
            if s.output.len() != k as usize || s.next.len() != k as usize {
                return Err(BuildError::invalid(
                    "states",
                    format!("state `{}` needs {k} outputs and successors", s.name),
                ));
            }
            for &y in &s.output {
                if y >= k || std::mem::replace(&mut seen[y as usize], true) {
                    return Err(BuildError::invalid(
                        "states",
                        format!("state `{}` does not permute the alphabet", s.name),
                    ));
                }
            }
            perms.push(s.output.clone());
            let row = s
                .next
                .iter()
                .map(|n| {
                    index.get(n).copied().ok_or_else(|| {
                        BuildError::invalid("states", format!("unknown state `{n}`"))
                    })
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            next.push(row);
        }
        let states: Vec<Arc<Machine>> = (0..perms.len() as u32)
            .map(|q| Arc::new(canonical(&perms, &next, q)))
            .collect();
        let inverses = states.iter().map(|m| Arc::new(inverse(m))).collect();
        let mut fp = format!("{k};");
        for (s, m) in automaton.states.iter().zip(&states) {
            fp.push_str(&format!("{}={:?};", s.name, m));
        }
        Ok(SelfSimilar {
            alphabet: k,
            names: automaton.states.iter().map(|s| s.name.clone()).collect(),
            states,
            inverses,
            identity: Arc::new(Machine::identity(k as usize)),
            cap: automaton.closure_cap,
            depth: automaton.bisimulation_depth,
            tag: FamilyTag::new(FamilyKind::SelfSimilar, &fp),
        })
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    /// Depth recorded for reports; equality of minimized machines is exact.
    pub fn bisimulation_depth(&self) -> u32 {
        self.depth
    }

    pub fn element(&self, letters: Vec<u32>, g: Arc<Machine>) -> SemigroupElement {
        SemigroupElement::new(
            self.tag,
            Payload::Machine {
                letters,
                section: g,
            },
        )
    }

    pub fn state(&self, name: &str) -> Option<Arc<Machine>> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.states[i].clone())
    }

    fn parts<'a>(&self, s: &'a SemigroupElement) -> Result<(&'a [u32], &'a Arc<Machine>)> {
        self.check_tag(s)?;
        match s.payload() {
            Payload::Machine { letters, section } => Ok((letters, section)),
            other => Err(SemigroupError::MalformedElement(format!(
                "expected a machine payload, got {other:?}"
            ))),
        }
    }

    fn compose(&self, g: &Machine, h: &Machine) -> Result<Arc<Machine>> {
        Ok(Arc::new(compose(g, h, self.cap)?))
    }

    /// `g(w)` for a core element `g`.
    pub fn image(&self, g: &SemigroupElement, w: &[u32]) -> Result<Vec<u32>> {
        let (letters, m) = self.parts(g)?;
        if !letters.is_empty() {
            return Err(SemigroupError::Precondition(
                "image of a non-core element".into(),
            ));
        }
        Ok(run(m, w).0)
    }

    /// `g|_w` for a core element `g`.
    pub fn section(&self, g: &SemigroupElement, w: &[u32]) -> Result<SemigroupElement> {
        let (letters, m) = self.parts(g)?;
        if !letters.is_empty() {
            return Err(SemigroupError::Precondition(
                "section of a non-core element".into(),
            ));
        }
        Ok(self.element(Vec::new(), Arc::new(section(m, w))))
    }

    /// Distinct sections of a core element, i.e. the states of its minimal machine.
    pub fn sections(&self, g: &SemigroupElement) -> Result<Vec<SemigroupElement>> {
        let (_, m) = self.parts(g)?;
        Ok(all_sections(m)
            .into_iter()
            .map(|s| self.element(Vec::new(), Arc::new(s)))
            .collect())
    }

    fn generator_machines(&self) -> Vec<(String, Arc<Machine>)> {
        let mut out = Vec::new();
        for (name, (m, inv)) in self
            .names
            .iter()
            .zip(self.states.iter().zip(&self.inverses))
        {
            if m.is_identity() {
                continue;
            }
            out.push((name.clone(), m.clone()));
            out.push((format!("{name}^-1"), inv.clone()));
        }
        out
    }

    /// Breadth-first ball in the Cayley graph of `G`, as `(machine, shortest word)`.
    fn ball(
        &self,
        radius: u32,
        stop_at: Option<&Machine>,
    ) -> Result<Vec<(Arc<Machine>, Vec<String>)>> {
        let gens = self.generator_machines();
        let mut seen: HashSet<Arc<Machine>> = HashSet::from([self.identity.clone()]);
        let mut out = vec![(self.identity.clone(), Vec::new())];
        let mut frontier = 0;
        for _ in 0..radius {
            if stop_at.is_some_and(|t| out.iter().any(|(m, _)| **m == *t)) {
                break;
            }
            let end = out.len();
            for i in frontier..end {
                for (name, g) in &gens {
                    let p = self.compose(&out[i].0, g)?;
                    if seen.insert(p.clone()) {
                        let mut w = out[i].1.clone();
                        w.push(name.clone());
                        out.push((p, w));
                        if out.len() > self.cap {
                            return Err(SemigroupError::Capped {
                                cap: self.cap,
                                context: "enumerating the group".into(),
                            });
                        }
                    }
                }
            }
            if out.len() == end {
                break;
            }
            frontier = end;
        }
        Ok(out)
    }

    fn group_word(&self, m: &Machine) -> Option<Vec<String>> {
        let ball = self.ball(FORMAT_SEARCH_LENGTH, Some(m)).ok()?;
        ball.into_iter().find(|(g, _)| **g == *m).map(|(_, w)| w)
    }
}

impl RightLcmSemigroup for SelfSimilar {
    fn tag(&self) -> FamilyTag {
        self.tag
    }

    fn name(&self) -> String {
        format!(
            "X* ⋈ G (|X| = {}, {} states)",
            self.alphabet,
            self.names.len()
        )
    }

    fn identity(&self) -> SemigroupElement {
        self.element(Vec::new(), self.identity.clone())
    }

    fn multiply(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<SemigroupElement> {
        let (w, g) = self.parts(s)?;
        let (v, h) = self.parts(t)?;
        let (gv, q) = run(g, v);
        let gq = if q == 0 {
            g.as_ref().clone()
        } else {
            canonical(&g.perms, &g.next, q)
        };
        let mut letters = w.to_vec();
        letters.extend(gv);
        Ok(self.element(letters, self.compose(&gq, h)?))
    }

    fn right_lcm(&self, s: &SemigroupElement, t: &SemigroupElement) -> Result<LcmOutcome> {
        let (w, g) = self.parts(s)?;
        let (v, h) = self.parts(t)?;
        let swap = w.len() > v.len();
        let ((short, sg), (long, lg)) = if swap {
            ((v, h), (w, g))
        } else {
            ((w, g), (v, h))
        };
        if !long.starts_with(short) {
            return Ok(LcmOutcome::Disjoint);
        }
        let ginv = inverse(sg);
        let (x, q) = run(&ginv, &long[short.len()..]);
        let short_c = self.element(x, Arc::new(canonical(&ginv.perms, &ginv.next, q)));
        let long_c = self.element(Vec::new(), Arc::new(inverse(lg)));
        let lcm = self.element(long.to_vec(), self.identity.clone());
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
        let (w, g) = self.parts(t)?;
        let (v, h) = self.parts(s)?;
        if !v.starts_with(w) {
            return Ok(Divisibility::NotDivisible);
        }
        let ginv = inverse(g);
        let (x, q) = run(&ginv, &v[w.len()..]);
        let sec = canonical(&ginv.perms, &ginv.next, q);
        Ok(Divisibility::Quotient {
            quotient: self.element(x, self.compose(&sec, h)?),
        })
    }

    fn scale(&self, s: &SemigroupElement) -> Result<ScaleValue> {
        let (w, _) = self.parts(s)?;
        let n = checked_pow(u64::from(self.alphabet), w.len())?;
        Ok(ScaleValue(s.scale_with(|_| n)))
    }

    fn is_core(&self, s: &SemigroupElement) -> Result<bool> {
        Ok(self.parts(s)?.0.is_empty())
    }

    fn is_unit(&self, s: &SemigroupElement) -> Result<bool> {
        self.is_core(s)
    }

    fn factor(&self, s: &SemigroupElement) -> Result<Factorization> {
        let (w, g) = self.parts(s)?;
        Ok(Factorization {
            transversal_part: self.element(w.to_vec(), self.identity.clone()),
            core_part: self.element(Vec::new(), g.clone()),
        })
    }

    fn transversal(&self, n: u64) -> Result<Vec<SemigroupElement>> {
        let Some(k) = exact_log(u64::from(self.alphabet), n) else {
            return Ok(Vec::new());
        };
        Ok(all_words(self.alphabet, k)
            .into_iter()
            .map(|w| self.element(w, self.identity.clone()))
            .collect())
    }

    fn enumerate_core(&self, max_weight: u32) -> Result<Vec<SemigroupElement>> {
        Ok(self
            .ball(max_weight, None)?
            .into_iter()
            .map(|(m, _)| self.element(Vec::new(), m))
            .collect())
    }

    fn core_weight(&self, a: &SemigroupElement) -> Result<u32> {
        let (w, g) = self.parts(a)?;
        if !w.is_empty() {
            return Err(SemigroupError::Precondition(
                "core weight of a non-core element".into(),
            ));
        }
        let ball = self.ball(u32::MAX, Some(g))?;
        ball.into_iter()
            .find(|(m, _)| m == g)
            .map(|(_, word)| word.len() as u32)
            .ok_or_else(|| {
                SemigroupError::Internal("core element outside the generated group".into())
            })
    }

    fn irreducible_scales(&self) -> Vec<u64> {
        vec![u64::from(self.alphabet)]
    }

    fn generators(&self) -> Vec<SemigroupElement> {
        let letters = (0..self.alphabet).map(|x| self.element(vec![x], self.identity.clone()));
        letters
            .chain(
                self.generator_machines()
                    .into_iter()
                    .map(|(_, m)| self.element(Vec::new(), m)),
            )
            .collect()
    }

    fn parse_element(&self, input: &str) -> Result<SemigroupElement> {
        let inner = input.trim();
        let (word, group) = match inner.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
            Some(body) => body
                .split_once(',')
                .ok_or_else(|| parse_error(input, "expected `(word, group-word)`"))?,
            None => (inner, ""),
        };
        let letters = word
            .trim()
            .chars()
            .filter(|c| *c != 'ε')
            .map(|c| {
                c.to_digit(10)
                    .filter(|d| *d < self.alphabet)
                    .ok_or_else(|| parse_error(input, "bad letter"))
            })
            .collect::<Result<Vec<u32>>>()?;
        let mut g = self.identity.clone();
        for tok in group.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, inv) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let i = self
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| parse_error(input, &format!("unknown state `{name}`")))?;
            let m = if inv {
                &self.inverses[i]
            } else {
                &self.states[i]
            };
            g = self.compose(&g, m)?;
        }
        Ok(self.element(letters, g))
    }

    fn format_element(&self, s: &SemigroupElement) -> String {
        let Ok((w, g)) = self.parts(s) else {
            return "<foreign>".into();
        };
        let word: String = w.iter().map(|x| x.to_string()).collect();
        let group = if g.is_identity() {
            "1".to_string()
        } else {
            match self.group_word(g) {
                Some(ws) => ws.join(" "),
                None => format!("<{} states>", g.states()),
            }
        };
        format!("({word}, {group})")
    }

    fn closed_forms(&self) -> ClosedForms {
        ClosedForms {
            faithful: Some(Certificate::holds(
                "group elements are distinct maps on X*, so the core acts faithfully",
            )),
            almost_free: None,
            finite_propagation: Some(Certificate::holds(
                "C_g is the set of sections of g, the states of its finite minimal machine",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adding_machine_products() {
        let s = SelfSimilar::new(&MealyAutomaton::adding_machine()).unwrap();
        let a = s.parse_element("(, a)").unwrap();
        let one = s.parse_element("(1, 1)").unwrap();
        // a * 1 = 0 * a|_1 = 0 a
        assert_eq!(
            s.multiply(&a, &one).unwrap(),
            s.parse_element("(0, a)").unwrap()
        );
        assert_eq!(s.image(&a, &[1, 1]).unwrap(), vec![0, 0]);
        assert_eq!(s.section(&a, &[1, 1]).unwrap(), a);
        assert_eq!(
            s.parse_element("(011, a a^-1)").unwrap(),
            s.parse_element("(011, 1)").unwrap()
        );
    }

    #[test]
    fn invalid_automata_are_rejected() {
        let mut m = MealyAutomaton::adding_machine();
        m.states[0].output = vec![0, 0];
        assert!(SelfSimilar::new(&m).is_err());
        let mut m = MealyAutomaton::adding_machine();
        m.states[0].next[0] = "zz".into();
        assert!(SelfSimilar::new(&m).is_err());
    }

    #[test]
    fn core_weights_follow_word_length() {
        let s = SelfSimilar::new(&MealyAutomaton::adding_machine()).unwrap();
        let core = s.enumerate_core(2).unwrap();
        // 1, a, a^-1, a^2, a^-2
        assert_eq!(core.len(), 5);
        assert_eq!(s.core_weight(&core[4]).unwrap(), 2);
        assert_eq!(s.format_element(&core[1]), "(, a)");
    }
}
