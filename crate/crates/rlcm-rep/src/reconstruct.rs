use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rlcm_analysis::ratio;
use rlcm_core::{RightLcmSemigroup, SemigroupElement};
use rlcm_engine::{
    ground_state_value, kms_value, pow, sample_spanning, to_f64, zeta, SpanningElement, StateValue,
    TraceSpec,
};
use serde::Serialize;

use crate::relations::defect_projection;
use crate::rep::{Entry, TruncatedRep};
use crate::{RepError, Result};

const FLOAT_SLACK: f64 = 1e-12;

/// Exact for integer `β`, floating otherwise.
#[derive(Clone, Debug)]
enum Real {
    Exact(BigRational),
    Float(f64),
}

impl Real {
    fn zero(exact: bool) -> Real {
        if exact {
            Real::Exact(BigRational::zero())
        } else {
            Real::Float(0.0)
        }
    }

    fn f64(&self) -> f64 {
        match self {
            Real::Exact(r) => to_f64(r),
            Real::Float(x) => *x,
        }
    }

    fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a + b),
            _ => Real::Float(self.f64() + other.f64()),
        }
    }

    fn sub(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a - b),
            _ => Real::Float(self.f64() - other.f64()),
        }
    }

    fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            _ => Real::Float(self.f64() * other.f64()),
        }
    }

    fn div(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a / b),
            _ => Real::Float(self.f64() / other.f64()),
        }
    }

    fn max0(&self) -> Real {
        match self {
            Real::Exact(a) if *a < BigRational::zero() => Real::Exact(BigRational::zero()),
            Real::Float(x) => Real::Float(x.max(0.0)),
            other => other.clone(),
        }
    }

    /// `self <= other`, with a rounding allowance in floating mode.
    fn le(&self, other: &Real) -> bool {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a <= b,
            _ => self.f64() <= other.f64() + FLOAT_SLACK,
        }
    }

    fn value(&self, cutoff: u64) -> StateValue {
        match self {
            Real::Exact(r) => StateValue::exact(r.clone()),
            Real::Float(x) => {
                let err = FLOAT_SLACK * x.abs().max(1.0);
                StateValue::Approximate {
                    value: *x,
                    lo: x - err,
                    hi: x + err,
                    rounding_error: err,
                    cutoff: Some(cutoff),
                }
            }
        }
    }
}

fn real_of(v: &StateValue) -> Result<Real> {
    match v {
        StateValue::Exact { value } => Ok(Real::Exact(value.clone())),
        StateValue::Approximate { value, .. } => Ok(Real::Float(*value)),
        StateValue::Enclosure { .. } => Err(RepError::Precondition(
            "expected a point value for ζ".into(),
        )),
    }
}

fn bounds_of(v: &StateValue) -> (Real, Real) {
    match v {
        StateValue::Exact { value } => (Real::Exact(value.clone()), Real::Exact(value.clone())),
        StateValue::Enclosure { lo, hi, .. } => (Real::Exact(lo.clone()), Real::Exact(hi.clone())),
        StateValue::Approximate { lo, hi, .. } => (Real::Float(*lo), Real::Float(*hi)),
    }
}

struct Beta {
    integer: Option<i64>,
    float: f64,
}

impl Beta {
    fn new(beta: &BigRational) -> Result<Beta> {
        if *beta <= BigRational::one() {
            return Err(RepError::Precondition(format!(
                "reconstruction needs β > 1, got {beta}"
            )));
        }
        let integer = if beta.is_integer() {
            beta.to_integer().to_i64()
        } else {
            None
        };
        Ok(Beta {
            integer,
            float: to_f64(beta),
        })
    }

    fn exact(&self) -> bool {
        self.integer.is_some()
    }

    /// `n^{-β}`.
    fn weight(&self, n: u64) -> Real {
        match self.integer {
            Some(k) => Real::Exact(pow(n, -k)),
            None => Real::Float((n as f64).powf(-self.float)),
        }
    }
}

fn zeta_real(index_set: &[u64], beta: &BigRational) -> Result<Real> {
    let z = zeta(index_set, beta)?;
    match z.value {
        Some(v) => real_of(&v),
        None => Err(RepError::Precondition("ζ diverges".into())),
    }
}

/// Whether `n` factors over `index_set`.
fn in_monoid(mut n: u64, index_set: &[u64]) -> bool {
    for &p in index_set {
        while n % p == 0 && n > 1 {
            n /= p;
        }
    }
    n == 1
}

/// `τ` of the compression of an operator to one fiber, read off from its
/// columns: on spanning elements the compression is `w_{c1} w_{c2}^*`, which
/// the canonical trace sends to 1 exactly when it fixes a vector it moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FiberTrace {
    Value(u8),
    Unresolved,
}

fn fiber_trace(rep: &TruncatedRep, fiber: usize, columns: impl Fn(usize) -> Entry) -> FiberTrace {
    let mut unresolved = false;
    for &k in &rep.fibers[fiber] {
        match columns(k) {
            Entry::Basis(j) if rep.fibers[fiber].contains(&j) => {
                return FiberTrace::Value(u8::from(j == k));
            }
            Entry::Outside => unresolved = true,
            _ => {}
        }
    }
    if unresolved {
        FiberTrace::Unresolved
    } else {
        FiberTrace::Value(0)
    }
}

/// `τ` of the compression of a diagonal 0/1 matrix, which must be constant on the fiber.
fn diagonal_fiber_trace(rep: &TruncatedRep, fiber: usize, diag: &[i64]) -> Option<u8> {
    let ks = &rep.fibers[fiber];
    let first = diag[ks[0]];
    if ks.iter().all(|&k| diag[k] == first) && (first == 0 || first == 1) {
        Some(first as u8)
    } else {
        None
    }
}

/// A state value read off the truncation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepValue {
    pub value: StateValue,
    /// Mass of fibers whose compression could not be identified inside the truncation.
    pub unresolved_mass: f64,
    /// `ζ_S(β)^{-1} Σ_{n > cap} n^{1-β}`, the mass of the levels cut off.
    pub excluded_mass: StateValue,
}

/// Mass `Σ_r N_r^{-β}` over fibers passing `keep`.
fn mass(rep: &TruncatedRep, beta: &Beta, keep: impl Fn(usize) -> bool) -> Real {
    let mut total = Real::zero(beta.exact());
    for (r, &n) in rep.scales.iter().enumerate() {
        if keep(r) {
            total = total.add(&beta.weight(n));
        }
    }
    total
}

fn excluded(rep: &TruncatedRep, beta: &Beta, index_set: &[u64], zeta_i: &Real) -> Real {
    let kept = mass(rep, beta, |r| in_monoid(rep.scales[r], index_set));
    let one = if beta.exact() {
        Real::Exact(BigRational::one())
    } else {
        Real::Float(1.0)
    };
    one.sub(&kept.div(zeta_i)).max0()
}

/// `ψ_β(v_s v_t^*) = ζ_S(β)^{-1} Σ_r N_r^{-β} τ(⟨ξ_r, V_s V_t^* ξ_r⟩)`, summed
/// over the fibers of the truncation.
pub fn state_value(
    sem: &dyn RightLcmSemigroup,
    rep: &TruncatedRep,
    beta: &BigRational,
    x: &SpanningElement,
) -> Result<RepValue> {
    let b = Beta::new(beta)?;
    let irr = sem.irreducible_scales();
    let z = zeta_real(&irr, beta)?;
    let (value, unresolved) = weighted_value(sem, rep, &b, x, &z)?;
    Ok(RepValue {
        value: value.value(rep.level_cap),
        unresolved_mass: unresolved,
        excluded_mass: excluded(rep, &b, &irr, &z).value(rep.level_cap),
    })
}

fn weighted_value(
    sem: &dyn RightLcmSemigroup,
    rep: &TruncatedRep,
    beta: &Beta,
    x: &SpanningElement,
    zeta_s: &Real,
) -> Result<(Real, f64)> {
    let v = rep.operator(sem, &x.left)?;
    let w = rep.adjoint(sem, &x.right)?;
    let mut total = Real::zero(beta.exact());
    let mut unresolved = 0.0;
    for r in 0..rep.fibers.len() {
        match fiber_trace(rep, r, |k| v.apply(w.columns[k])) {
            FiberTrace::Value(1) => total = total.add(&beta.weight(rep.scales[r])),
            FiberTrace::Value(_) => {}
            FiberTrace::Unresolved => unresolved += beta.weight(rep.scales[r]).f64(),
        }
    }
    Ok((total.div(zeta_s), unresolved / zeta_s.f64()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleCheck {
    pub element: String,
    pub rep_value: StateValue,
    pub engine_value: StateValue,
    /// Distance from the truncated value to the engine's enclosure.
    pub deviation: f64,
    pub unresolved_mass: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReconstructionReport {
    #[serde(serialize_with = "ratio::serialize")]
    pub beta: BigRational,
    pub index_set: Vec<u64>,
    pub zeta_i: StateValue,
    /// `φ̃(Q_I)` with `Q_I = Π_{p ∈ I} d_p`.
    pub q_lower: StateValue,
    /// `φ̃(Q_I) ζ_I(β)`, which tends to 1.
    pub q_lower_times_zeta: StateValue,
    /// `ψ_{β,τ,I}(Q^I)` with `Q^I = Π_{p ∉ I} d_p`, which tends to 1.
    pub q_upper: StateValue,
    pub excluded_mass: StateValue,
    /// Mass cut off from the `I`-restricted sum.
    pub excluded_mass_i: StateValue,
    /// Fibers on which a defect product was not constant.
    pub mixed_fibers: Vec<String>,
    pub samples: Vec<SampleCheck>,
    pub max_deviation: f64,
    pub holds: bool,
}

fn defect_product(
    sem: &dyn RightLcmSemigroup,
    rep: &TruncatedRep,
    primes: &[u64],
) -> Result<Vec<i64>> {
    let mut q = vec![1i64; rep.len()];
    for &p in primes {
        let d = defect_projection(sem, rep, p)?;
        for (x, y) in q.iter_mut().zip(&d.diagonal) {
            *x *= y;
        }
    }
    Ok(q)
}

/// Compares weighted fiber sums over the truncation with `ζ_I(β)^{-1}` and
/// with exact engine values on `samples` spanning elements. Every deviation
/// must stay within the excluded-level mass.
pub fn verify_reconstruction(
    sem: &dyn RightLcmSemigroup,
    rep: &TruncatedRep,
    beta: &BigRational,
    index_set: &[u64],
    tolerance: Option<f64>,
    samples: usize,
) -> Result<ReconstructionReport> {
    let b = Beta::new(beta)?;
    let irr = sem.irreducible_scales();
    if let Some(p) = index_set.iter().find(|p| !irr.contains(p)) {
        return Err(RepError::Precondition(format!(
            "{p} is not an irreducible scale of {}",
            sem.name()
        )));
    }
    let zeta_s = zeta_real(&irr, beta)?;
    let zeta_i = zeta_real(index_set, beta)?;
    let excl = excluded(rep, &b, &irr, &zeta_s);
    if let Some(tol) = tolerance {
        if excl.f64() > tol {
            return Err(RepError::Truncation {
                excluded: excl.f64(),
                tolerance: tol,
            });
        }
    }
    let excl_i = excluded(rep, &b, index_set, &zeta_i);
    let mut mixed = Vec::new();

    let lower_diag = defect_product(sem, rep, index_set)?;
    let complement: Vec<u64> = irr
        .iter()
        .copied()
        .filter(|p| !index_set.contains(p))
        .collect();
    let upper_diag = defect_product(sem, rep, &complement)?;
    let mut lower = Real::zero(b.exact());
    let mut upper = Real::zero(b.exact());
    for r in 0..rep.fibers.len() {
        let w = b.weight(rep.scales[r]);
        match diagonal_fiber_trace(rep, r, &lower_diag) {
            Some(1) => lower = lower.add(&w),
            Some(_) => {}
            None => mixed.push(format!(
                "Q_I on {}",
                sem.format_element(&rep.transversal[r])
            )),
        }
        if in_monoid(rep.scales[r], index_set) {
            match diagonal_fiber_trace(rep, r, &upper_diag) {
                Some(1) => upper = upper.add(&w),
                Some(_) => {}
                None => mixed.push(format!(
                    "Q^I on {}",
                    sem.format_element(&rep.transversal[r])
                )),
            }
        }
    }
    let lower = lower.div(&zeta_s);
    let upper = upper.div(&zeta_i);
    let product = lower.mul(&zeta_i);
    let one = if b.exact() {
        Real::Exact(BigRational::one())
    } else {
        Real::Float(1.0)
    };
    // φ̃(Q_I) is a partial sum of ζ_I(β)^{-1}; Q^I loses only the I-levels past the cap
    let lower_dev = one.div(&zeta_i).sub(&lower);
    let upper_dev = one.sub(&upper);
    let mut holds = mixed.is_empty()
        && Real::zero(b.exact()).le(&lower_dev)
        && lower_dev.le(&excl)
        && Real::zero(b.exact()).le(&upper_dev)
        && upper_dev.le(&excl_i);
    let mut max_deviation = lower_dev.f64().abs();

    let cutoff = rep.level_cap.saturating_mul(rep.level_cap).min(1 << 12);
    let mut checks = Vec::new();
    for x in sample_spanning(sem, rep.level_cap, samples)?
        .into_iter()
        .take(samples)
    {
        let (value, unresolved) = weighted_value(sem, rep, &b, &x, &zeta_s)?;
        let engine = kms_value(sem, beta, &x, &TraceSpec::Canonical, cutoff)?;
        let (lo, hi) = bounds_of(&engine);
        let dev = lo.sub(&value).max0().add(&value.sub(&hi).max0());
        let budget = if unresolved > 0.0 {
            excl.add(&Real::Float(unresolved))
        } else {
            excl.clone()
        };
        let ok = value.le(&hi) && dev.le(&budget);
        holds &= ok;
        max_deviation = max_deviation.max(dev.f64());
        checks.push(SampleCheck {
            element: format!(
                "v_{} v_{}*",
                sem.format_element(&x.left),
                sem.format_element(&x.right)
            ),
            rep_value: value.value(rep.level_cap),
            engine_value: engine,
            deviation: dev.f64(),
            unresolved_mass: unresolved,
            ok,
        });
    }

    Ok(ReconstructionReport {
        beta: beta.clone(),
        index_set: index_set.to_vec(),
        zeta_i: zeta_i.value(rep.level_cap),
        q_lower: lower.value(rep.level_cap),
        q_lower_times_zeta: product.value(rep.level_cap),
        q_upper: upper.value(rep.level_cap),
        excluded_mass: excl.value(rep.level_cap),
        excluded_mass_i: excl_i.value(rep.level_cap),
        mixed_fibers: mixed,
        samples: checks,
        max_deviation,
        holds,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GroundStateReport {
    pub checked: usize,
    pub skipped: usize,
    /// `⟨V_1 ξ_1 δ_1, ξ_1 δ_1⟩ = 1`.
    pub unit_norm: bool,
    pub failures: Vec<String>,
}

impl GroundStateReport {
    pub fn holds(&self) -> bool {
        self.unit_norm && self.failures.is_empty()
    }
}

/// The vector state at `ξ_1 ⊗ ξ_τ`: `τ` of the compression of `V_s V_t^*`
/// to the fiber over the identity, compared with the engine's ground state,
/// which vanishes unless `s` and `t` are both core.
pub fn ground_state_check(
    sem: &dyn RightLcmSemigroup,
    rep: &TruncatedRep,
    samples: usize,
) -> Result<GroundStateReport> {
    let id = sem.identity();
    let fiber = rep
        .transversal
        .iter()
        .position(|t| *t == id)
        .ok_or_else(|| RepError::Precondition("the identity fiber is missing".into()))?;
    let mut pairs: Vec<SpanningElement> = sample_spanning(sem, rep.level_cap, samples)?;
    let core: Vec<SemigroupElement> = sem.enumerate_core(rep.core_cap)?;
    for a in &core {
        for b in &core {
            pairs.push(SpanningElement::new(a.clone(), b.clone()));
        }
    }
    let mut report = GroundStateReport::default();
    let unit = SpanningElement::range(id);
    for (i, x) in std::iter::once(&unit).chain(&pairs).enumerate() {
        let v = rep.operator(sem, &x.left)?;
        let w = rep.adjoint(sem, &x.right)?;
        let got = match fiber_trace(rep, fiber, |k| v.apply(w.columns[k])) {
            FiberTrace::Value(t) => t,
            FiberTrace::Unresolved => {
                report.skipped += 1;
                continue;
            }
        };
        if i == 0 {
            report.unit_norm = got == 1;
        }
        report.checked += 1;
        let expected = ground_state_value(sem, x, &TraceSpec::Canonical)?;
        let both_core = sem.is_core(&x.left)? && sem.is_core(&x.right)?;
        let value = BigRational::from_integer(got.into());
        if !expected.contains(&value) || (!both_core && got != 0) {
            report.failures.push(format!(
                "v_{} v_{}*: {got}",
                sem.format_element(&x.left),
                sem.format_element(&x.right)
            ));
        }
    }
    Ok(report)
}
