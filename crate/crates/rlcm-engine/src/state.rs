use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use rlcm_analysis::{kappa_table, ratio};
use rlcm_core::sample::factored_elements;
use rlcm_core::{LcmOutcome, RightLcmSemigroup, SemigroupElement};
use serde::Serialize;

use crate::value::{pow, to_f64, StateValue, Truncation, Weight, FLOAT_BUDGET};
use crate::zeta::{critical_beta, mode, zeta, Mode};
use crate::EngineError;

/// `v_s v_t^*`; `s = t` gives the range projection `e_{sS}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningElement {
    pub left: SemigroupElement,
    pub right: SemigroupElement,
}

impl SpanningElement {
    pub fn new(left: SemigroupElement, right: SemigroupElement) -> Self {
        SpanningElement { left, right }
    }

    pub fn range(s: SemigroupElement) -> Self {
        SpanningElement {
            right: s.clone(),
            left: s,
        }
    }
}

/// A trace or state on `C*(S_c)`, given by its values on `w_a w_b^*`.
#[derive(Clone, Debug, PartialEq)]
pub enum TraceSpec {
    /// `τ(w_a w_b^*) = δ_{a,b}`.
    Canonical,
    /// `ρ(w_a w_b^*) = κ_{a,b}`, enclosed from the κ table up to `level`.
    Rho { level: u64 },
    /// Listed values; unlisted pairs fall back to `δ_{a,b}`.
    Table(Vec<(SemigroupElement, SemigroupElement, BigRational)>),
}

impl TraceSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TraceSpec::Canonical => "canonical",
            TraceSpec::Rho { .. } => "rho",
            TraceSpec::Table(_) => "table",
        }
    }

    fn lookup(&self, a: &SemigroupElement, b: &SemigroupElement) -> BigRational {
        if let TraceSpec::Table(rows) = self {
            if let Some((_, _, v)) = rows.iter().find(|(x, y, _)| x == a && y == b) {
                return v.clone();
            }
        }
        if a == b {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    }

    fn validate(&self) -> Result<(), EngineError> {
        if let TraceSpec::Table(rows) = self {
            for (_, _, v) in rows {
                if v.abs() > BigRational::one() {
                    return Err(EngineError::Precondition(
                        "trace table values must lie in [-1, 1]".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn refuse_below_one(beta: &BigRational) -> Result<(), EngineError> {
    if *beta < BigRational::one() {
        Err(EngineError::BelowOne {
            beta: beta.to_string(),
        })
    } else {
        Ok(())
    }
}

fn weight(n: u64, beta: &BigRational) -> Weight {
    match mode(beta) {
        Mode::Integer(b) => Weight::Exact(pow(n, -b)),
        Mode::Real(b) => {
            let value = (n as f64).powf(-b);
            Weight::Float {
                value,
                error: 4.0 * f64::EPSILON * value,
            }
        }
    }
}

/// The value of the trace or state on `w_a w_b^*` for core `a`, `b`.
pub fn trace_value(
    sem: &dyn RightLcmSemigroup,
    trace: &TraceSpec,
    a: &SemigroupElement,
    b: &SemigroupElement,
) -> Result<StateValue, EngineError> {
    trace.validate()?;
    Ok(match trace {
        TraceSpec::Rho { level } => {
            let t = kappa_table(sem, a, b, *level)?;
            StateValue::enclosure(t.enclosure.0, t.enclosure.1, None)
        }
        _ => StateValue::exact(trace.lookup(a, b)),
    })
}

/// `ψ(v_s v_t^*)`: zero unless `i(s) = i(t)`, otherwise `N_s^{-β}` times the
/// value of the core state on `w_{c(s)} w_{c(t)}^*`.
///
/// At `β = β_c = 1` the canonical value is `δ` when the action is certified
/// almost free and the Rho trace gives the κ enclosure. Above `β_c` the
/// series `ζ_S(β)^{-1} Σ_n n^{-β} Σ_{f ∈ G_n} τ(w_{c(af)} w_{c(bf)}^*)` is
/// summed over scales up to `cutoff` and enclosed using the ζ tail.
pub fn kms_value(
    sem: &dyn RightLcmSemigroup,
    beta: &BigRational,
    x: &SpanningElement,
    trace: &TraceSpec,
    cutoff: u64,
) -> Result<StateValue, EngineError> {
    refuse_below_one(beta)?;
    trace.validate()?;
    let (fs, ft) = (sem.factor(&x.left)?, sem.factor(&x.right)?);
    if fs.transversal_part != ft.transversal_part {
        return Ok(StateValue::zero());
    }
    let n = sem.scale(&x.left)?.get();
    let core = core_value(sem, beta, &fs.core_part, &ft.core_part, trace, cutoff)?;
    Ok(core.scale(&weight(n, beta)))
}

fn core_value(
    sem: &dyn RightLcmSemigroup,
    beta: &BigRational,
    a: &SemigroupElement,
    b: &SemigroupElement,
    trace: &TraceSpec,
    cutoff: u64,
) -> Result<StateValue, EngineError> {
    let critical = *beta <= critical_beta(sem).value;
    if let TraceSpec::Rho { level } = trace {
        if !critical {
            return Err(EngineError::Precondition(
                "the Rho trace is evaluated at β = β_c = 1 only".into(),
            ));
        }
        return trace_value(sem, &TraceSpec::Rho { level: *level }, a, b);
    }
    if a == b {
        return Ok(StateValue::one());
    }
    if critical {
        let almost_free = sem.closed_forms().almost_free.is_some_and(|c| c.holds);
        if almost_free && *trace == TraceSpec::Canonical {
            return Ok(StateValue::zero());
        }
        return Err(EngineError::Precondition(
            "at β = 1 the series diverges; without a certified almost free action use the Rho trace".into(),
        ));
    }
    series(sem, beta, a, b, trace, cutoff)
}

fn series(
    sem: &dyn RightLcmSemigroup,
    beta: &BigRational,
    a: &SemigroupElement,
    b: &SemigroupElement,
    trace: &TraceSpec,
    cutoff: u64,
) -> Result<StateValue, EngineError> {
    let irr = sem.irreducible_scales();
    let scales = sem.scale_values(cutoff);
    let sums: Vec<BigRational> = scales
        .par_iter()
        .map(|&n| {
            let mut total = BigRational::zero();
            for f in sem.transversal(n)? {
                let (af, bf) = (
                    sem.factor(&sem.multiply(a, &f)?)?,
                    sem.factor(&sem.multiply(b, &f)?)?,
                );
                if af.transversal_part == bf.transversal_part {
                    total += trace.lookup(&af.core_part, &bf.core_part);
                }
            }
            Ok(total)
        })
        .collect::<Result<_, EngineError>>()?;
    let signed = matches!(trace, TraceSpec::Table(_));
    let z = zeta(&irr, beta)?
        .value
        .ok_or_else(|| EngineError::Precondition("ζ_S(β) diverges".into()))?;
    match (mode(beta), z) {
        (Mode::Integer(k), StateValue::Exact { value: z }) => {
            let mut partial = BigRational::zero();
            let mut mass = BigRational::zero();
            for (&n, s) in scales.iter().zip(&sums) {
                partial += s * pow(n, -k);
                mass += pow(n, 1 - k);
            }
            let tail = &z - mass;
            let lo = if signed {
                &partial - &tail
            } else {
                partial.clone()
            };
            let hi = &partial + &tail;
            Ok(StateValue::enclosure(
                lo / &z,
                hi / &z,
                Some(Truncation {
                    cutoff,
                    tail_bound: tail,
                }),
            ))
        }
        (
            Mode::Real(k),
            StateValue::Approximate {
                value: z,
                rounding_error: zerr,
                ..
            },
        ) => {
            let mut partial = 0.0f64;
            let mut mass = 0.0f64;
            let mut err = 0.0f64;
            for (&n, s) in scales.iter().zip(&sums) {
                let w = (n as f64).powf(-k);
                partial += to_f64(s) * w;
                mass += w * n as f64;
                err += 8.0 * f64::EPSILON * (w * n as f64);
            }
            let tail = (z - mass).max(0.0);
            let rounding_error = (err + zerr) * 2.0 / z;
            if rounding_error > FLOAT_BUDGET {
                return Err(EngineError::Precision {
                    error: rounding_error,
                });
            }
            let lo = (if signed { partial - tail } else { partial }) / z - rounding_error;
            let hi = (partial + tail + zerr) / (z - zerr) + rounding_error;
            Ok(StateValue::Approximate {
                value: partial / z,
                lo,
                hi,
                rounding_error,
                cutoff: Some(cutoff),
            })
        }
        _ => Err(EngineError::Precondition(
            "inconsistent ζ evaluation mode".into(),
        )),
    }
}

/// `ψ(v_s v_t^*)` for the ground state built from `state`: zero unless both
/// `s` and `t` are core, otherwise the state's value on `w_s w_t^*`.
pub fn ground_state_value(
    sem: &dyn RightLcmSemigroup,
    x: &SpanningElement,
    state: &TraceSpec,
) -> Result<StateValue, EngineError> {
    if !sem.is_core(&x.left)? || !sem.is_core(&x.right)? {
        return Ok(StateValue::zero());
    }
    trace_value(sem, state, &x.left, &x.right)
}

/// `Σ_{f ∈ T_n} ψ_β(e_{fS})`, which equals `n^{1-β}`.
pub fn foundation_sum(
    sem: &dyn RightLcmSemigroup,
    beta: &BigRational,
    n: u64,
) -> Result<StateValue, EngineError> {
    refuse_below_one(beta)?;
    let members = sem.transversal(n)?;
    if members.is_empty() {
        return Err(EngineError::Precondition(format!(
            "{n} is not a scale value"
        )));
    }
    let mut exact = BigRational::zero();
    let mut approx = (0.0f64, 0.0f64);
    for f in members {
        match kms_value(
            sem,
            beta,
            &SpanningElement::range(f),
            &TraceSpec::Canonical,
            n,
        )? {
            StateValue::Exact { value } => exact += value,
            StateValue::Approximate {
                value,
                rounding_error,
                ..
            } => {
                approx.0 += value;
                approx.1 += rounding_error + f64::EPSILON * approx.0;
            }
            StateValue::Enclosure { .. } => {
                return Err(EngineError::Precondition(
                    "range projections evaluate exactly".into(),
                ))
            }
        }
    }
    if let Mode::Real(_) = mode(beta) {
        let (value, err) = approx;
        return Ok(StateValue::Approximate {
            value,
            lo: value - err,
            hi: value + err,
            rounding_error: err,
            cutoff: None,
        });
    }
    Ok(StateValue::exact(exact))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoundationSum {
    pub n: u64,
    pub value: StateValue,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryReport {
    #[serde(serialize_with = "ratio::serialize")]
    pub beta: BigRational,
    /// `ψ(e_{aS}) = 1` for every sampled core `a`.
    pub factors_through_qc: bool,
    pub core_checked: usize,
    /// `Σ_{f ∈ T_n} ψ(e_{fS}) = 1` for every tested `n`.
    pub factors_through_qp: bool,
    pub sums: Vec<FoundationSum>,
}

pub fn boundary_factoring(
    sem: &dyn RightLcmSemigroup,
    beta: &BigRational,
    depth: u64,
    core_weight: u32,
) -> Result<BoundaryReport, EngineError> {
    refuse_below_one(beta)?;
    let core = sem.enumerate_core(core_weight)?;
    let mut qc = true;
    for a in &core {
        let v = kms_value(
            sem,
            beta,
            &SpanningElement::range(a.clone()),
            &TraceSpec::Canonical,
            1,
        )?;
        qc &= v.contains(&BigRational::one());
    }
    let mut sums = Vec::new();
    let mut qp = true;
    for n in sem.scale_values(depth) {
        let value = foundation_sum(sem, beta, n)?;
        qp &= match &value {
            StateValue::Exact { value } => value.is_one(),
            other => other.contains(&BigRational::one()) && other.width() == 0.0,
        };
        sums.push(FoundationSum { n, value });
    }
    Ok(BoundaryReport {
        beta: beta.clone(),
        factors_through_qc: qc,
        core_checked: core.len(),
        factors_through_qp: qp,
        sums,
    })
}

/// Result of comparing `τ(xy)` with `τ(yx)` on products of two core spanning elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceCheck {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// `w_a w_b^* w_d w_e^*` as `w_x w_y^*`, or `None` when `bS ∩ dS = ∅`.
fn core_product(
    sem: &dyn RightLcmSemigroup,
    [a, b, d, e]: [&SemigroupElement; 4],
) -> Result<Option<(SemigroupElement, SemigroupElement)>, EngineError> {
    match sem.right_lcm(b, d)? {
        LcmOutcome::Disjoint => Ok(None),
        LcmOutcome::Lcm {
            left_complement,
            right_complement,
            ..
        } => Ok(Some((
            sem.multiply(a, &left_complement)?,
            sem.multiply(e, &right_complement)?,
        ))),
    }
}

fn overlaps(x: &StateValue, y: &StateValue) -> bool {
    match (x, y) {
        (StateValue::Exact { value: p }, StateValue::Exact { value: q }) => p == q,
        _ => {
            let ((a, b), (c, d)) = (x.bounds_f64(), y.bounds_f64());
            a <= d && c <= b
        }
    }
}

/// Bounded check that `trace` is tracial on `C*(S_c)`, over all quadruples
/// of core elements of weight at most `core_weight`.
pub fn trace_check(
    sem: &dyn RightLcmSemigroup,
    trace: &TraceSpec,
    core_weight: u32,
) -> Result<TraceCheck, EngineError> {
    let core = sem.enumerate_core(core_weight)?;
    let mut out = TraceCheck::default();
    let value =
        |p: Option<(SemigroupElement, SemigroupElement)>| -> Result<StateValue, EngineError> {
            match p {
                None => Ok(StateValue::zero()),
                Some((x, y)) => trace_value(sem, trace, &x, &y),
            }
        };
    for a in &core {
        for b in &core {
            for d in &core {
                for e in &core {
                    let xy = value(core_product(sem, [a, b, d, e])?)?;
                    let yx = value(core_product(sem, [d, e, a, b])?)?;
                    out.checked += 1;
                    if !overlaps(&xy, &yx) {
                        let f = |s| sem.format_element(s);
                        out.failures
                            .push(format!("w_{} w_{}* w_{} w_{}*", f(a), f(b), f(d), f(e)));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A deterministic sample of spanning elements `v_s v_t^*` with scale at most
/// `depth`: mostly pairs with `i(s) = i(t)` and a fifth with `i(s) ≠ i(t)`.
pub fn sample_spanning(
    sem: &dyn RightLcmSemigroup,
    depth: u64,
    count: usize,
) -> Result<Vec<SpanningElement>, EngineError> {
    let elems = factored_elements(sem, depth, 2)?;
    let parts: Vec<SemigroupElement> = elems
        .iter()
        .map(|s| Ok(sem.factor(s)?.transversal_part))
        .collect::<Result<_, EngineError>>()?;
    let mut same = Vec::new();
    let mut diff = Vec::new();
    for i in 0..elems.len() {
        for j in 0..elems.len() {
            let x = SpanningElement::new(elems[i].clone(), elems[j].clone());
            if parts[i] == parts[j] {
                same.push(x);
            } else {
                diff.push(x);
            }
        }
    }
    let pick = |v: Vec<SpanningElement>, k: usize| -> Vec<SpanningElement> {
        if v.len() <= k || k == 0 {
            return v.into_iter().take(k).collect();
        }
        let stride = v.len() / k;
        v.into_iter().step_by(stride).take(k).collect()
    };
    let k_diff = (count / 5).min(diff.len());
    let mut out = pick(same, count - k_diff);
    out.extend(pick(diff, k_diff));
    Ok(out)
}
