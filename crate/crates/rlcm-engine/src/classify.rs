use num_rational::BigRational;
use num_traits::{One, Zero};
use rlcm_analysis::{
    check_admissible, check_almost_free, check_faithful, check_propagation, kappa_table, ratio,
    ActionReport, AdmissibilityReport, Bounds, Verdict,
};
use rlcm_core::RightLcmSemigroup;
use serde::{Serialize, Serializer};

use crate::state::{
    boundary_factoring, ground_state_value, kms_value, sample_spanning, trace_check,
    SpanningElement, TraceSpec,
};
use crate::value::{pow, StateValue};
use crate::zeta::{critical_beta, zeta, CriticalBeta};
use crate::EngineError;

/// An inverse temperature, possibly infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Temperature {
    Finite(BigRational),
    Infinite,
}

impl Serialize for Temperature {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Temperature::Finite(b) => ratio::serialize(b, s),
            Temperature::Infinite => s.serialize_str("infinity"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Established,
    Undecided,
    NotApplicable,
}

/// A checked instance of a formula: `ok` is computed, not asserted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub label: String,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
}

impl Evidence {
    fn new(
        label: impl Into<String>,
        expected: impl ToString,
        observed: impl ToString,
        ok: bool,
    ) -> Self {
        Evidence {
            label: label.into(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Item {
    pub key: &'static str,
    pub statement: String,
    pub status: Status,
    /// Which uniqueness criteria apply, for the uniqueness item.
    pub routes: Vec<String>,
    pub evidence: Vec<Evidence>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub instance: String,
    pub beta: Temperature,
    pub critical_beta: CriticalBeta,
    pub admissibility: AdmissibilityReport,
    pub faithful: ActionReport,
    pub almost_free: ActionReport,
    pub finite_propagation: ActionReport,
    pub items: Vec<Item>,
}

impl Classification {
    pub fn item(&self, key: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.key == key)
    }

    /// Whether every evidence line checked out.
    pub fn evidence_ok(&self) -> bool {
        self.items.iter().flat_map(|i| &i.evidence).all(|e| e.ok)
    }
}

fn show(v: &StateValue) -> String {
    match v {
        StateValue::Exact { value } => value.to_string(),
        StateValue::Enclosure { lo, hi, .. } => format!("[{lo}, {hi}]"),
        StateValue::Approximate { lo, hi, .. } => format!("[{lo:e}, {hi:e}]"),
    }
}

fn item(key: &'static str, statement: &str, status: Status, evidence: Vec<Evidence>) -> Item {
    Item {
        key,
        statement: statement.into(),
        status,
        routes: Vec::new(),
        evidence,
    }
}

fn holds(r: &ActionReport) -> bool {
    matches!(r.verdict, Verdict::Holds { .. })
}

/// Summarizes the KMS structure at `beta`, with every statement backed by
/// formulas evaluated on sampled spanning elements.
///
/// Fails when the instance is not admissible at the configured depth.
pub fn classify(
    sem: &dyn RightLcmSemigroup,
    beta: &Temperature,
    bounds: &Bounds,
) -> Result<Classification, EngineError> {
    let admissibility = check_admissible(sem, bounds)?;
    if !admissibility.all_pass() {
        let failed: Vec<&str> = admissibility
            .checks()
            .iter()
            .filter(|(_, c)| !c.passed())
            .map(|(name, _)| *name)
            .collect();
        return Err(EngineError::NotAdmissible {
            depth: bounds.depth,
            failed: failed.join(", "),
        });
    }
    let bc = critical_beta(sem);
    let (w, depth) = (bounds.core_weight, bounds.depth);
    let faithful = check_faithful(sem, w, depth)?;
    let almost_free = check_almost_free(sem, w, depth)?;
    let finite_propagation = check_propagation(sem, w, depth)?;
    let sample = sample_spanning(sem, depth.min(27), 40)?;
    let one = BigRational::one();

    let mut items = Vec::new();

    let refused = matches!(
        kms_value(
            sem,
            &BigRational::new(1.into(), 2.into()),
            &SpanningElement::range(sem.identity()),
            &TraceSpec::Canonical,
            1
        ),
        Err(EngineError::BelowOne { .. })
    );
    let mut ev = vec![Evidence::new(
        "kms_value at β = 1/2",
        "refused",
        if refused { "refused" } else { "evaluated" },
        refused,
    )];
    for n in sem
        .scale_values(depth)
        .into_iter()
        .filter(|n| *n > 1)
        .take(3)
    {
        ev.push(Evidence::new(
            format!("n^(1-β) for n = {n}, β < 1"),
            "> 1",
            format!("n = {n} > 1"),
            n > 1,
        ));
    }
    items.push(item(
        "no-kms-below-one",
        "There are no KMS_β-states for β < 1.",
        Status::Established,
        ev,
    ));

    let z2 = zeta(
        &sem.irreducible_scales(),
        &BigRational::from_integer(2.into()),
    )?;
    let ev = vec![Evidence::new(
        "ζ_S(2)",
        "finite",
        z2.value.as_ref().map_or("diverges".into(), show),
        z2.converges,
    )];
    items.push(item(
        "critical-interval",
        &format!("The critical interval is [1, β_c] with β_c = {}.", bc.value),
        Status::Established,
        ev,
    ));

    let mut routes = Vec::new();
    let mut ev = Vec::new();
    if holds(&almost_free) {
        routes.push("2a: α is almost free".to_string());
        for x in &sample {
            let v = kms_value(sem, &one, x, &TraceSpec::Canonical, depth)?;
            let n = sem.scale(&x.left)?.get();
            let expected = if x.left == x.right {
                pow(n, -1)
            } else {
                BigRational::zero()
            };
            ev.push(Evidence::new(
                format!(
                    "ψ_1(v_{} v_{}*)",
                    sem.format_element(&x.left),
                    sem.format_element(&x.right)
                ),
                &expected,
                show(&v),
                v.contains(&expected),
            ));
        }
    }
    if bc.value.is_one() && holds(&faithful) && holds(&finite_propagation) {
        routes.push("2b: β_c = 1, α is faithful and S has finite propagation".to_string());
        let core = sem.enumerate_core(w.min(2))?;
        for a in &core {
            for b in &core {
                let t = kappa_table(sem, a, b, depth)?;
                let (lo, hi) = &t.enclosure;
                let ok = lo <= hi && (a != b || lo.is_one());
                ev.push(Evidence::new(
                    format!("ρ(w_{} w_{}*)", t.pair.0, t.pair.1),
                    "κ enclosure within [0, 1]",
                    format!("[{lo}, {hi}]"),
                    ok && *lo >= BigRational::zero() && *hi <= one,
                ));
            }
        }
    }
    let mut uniqueness = item(
        "uniqueness",
        "For β in the critical interval there is a unique KMS_β-state.",
        if routes.is_empty() {
            Status::Undecided
        } else {
            Status::Established
        },
        ev,
    );
    if routes.is_empty() {
        if let Verdict::Violated {
            witness: Some((a, b)),
            certificate,
        } = &faithful.verdict
        {
            uniqueness.evidence.push(Evidence::new(
                "non-faithful witness",
                "α_a ≠ α_b",
                format!("α_{a} = α_{b}: {certificate}"),
                true,
            ));
        }
    }
    uniqueness.routes = routes;
    items.push(uniqueness);

    let above = match beta {
        Temperature::Finite(b) if *b > bc.value => b.clone(),
        _ => &bc.value + BigRational::one(),
    };
    let mut ev = Vec::new();
    for x in sample.iter().filter(|x| x.left == x.right).take(5) {
        let n = sem.scale(&x.left)?.get();
        let v = kms_value(sem, &above, x, &TraceSpec::Canonical, depth)?;
        let expected = crate::value::to_f64(&above);
        let target = (n as f64).powf(-expected);
        let (lo, hi) = v.bounds_f64();
        ev.push(Evidence::new(
            format!("ψ_{{{above},τ}}(e_{{{}S}})", sem.format_element(&x.left)),
            format!("N_s^(-β) = {target:e}"),
            show(&v),
            lo <= target * (1.0 + 1e-12) && target * (1.0 - 1e-12) <= hi,
        ));
    }
    items.push(item(
        "parametrization",
        "For β > β_c, KMS_β-states correspond affinely and homeomorphically to normalised traces on C*(S_c).",
        Status::Established,
        ev,
    ));

    let at = match beta {
        Temperature::Finite(b) if *b >= one => b.clone(),
        _ => one.clone(),
    };
    let report = boundary_factoring(sem, &at, depth, w)?;
    let mut ev = vec![Evidence::new(
        "ψ(e_{aS}) for sampled core a",
        1,
        format!("1 on {} core elements", report.core_checked),
        report.factors_through_qc,
    )];
    for s in &report.sums {
        let expected = match crate::zeta::mode(&at) {
            crate::zeta::Mode::Integer(k) => pow(s.n, 1 - k),
            crate::zeta::Mode::Real(_) => BigRational::zero(),
        };
        let ok = match crate::zeta::mode(&at) {
            crate::zeta::Mode::Integer(_) => s.value.contains(&expected),
            crate::zeta::Mode::Real(k) => {
                let (lo, hi) = s.value.bounds_f64();
                let t = (s.n as f64).powf(1.0 - k);
                lo <= t * (1.0 + 1e-12) && t * (1.0 - 1e-12) <= hi
            }
        };
        ev.push(Evidence::new(
            format!("Σ_{{f ∈ T_{}}} ψ(e_{{fS}})", s.n),
            format!("n^(1-β) at β = {at}"),
            show(&s.value),
            ok,
        ));
    }
    let qp = report.factors_through_qp;
    ev.push(Evidence::new(
        "factors through Q_p",
        at.is_one(),
        qp,
        qp == at.is_one(),
    ));
    items.push(item(
        "factoring",
        "Every KMS_β-state factors through Q_c(S); it factors through Q_p(S) if and only if β = 1.",
        Status::Established,
        ev,
    ));

    let check = trace_check(sem, &TraceSpec::Canonical, w.min(2))?;
    let mut ev = vec![Evidence::new(
        "canonical state is tracial on sampled core products",
        "no failures",
        format!(
            "{} checked, {} failures",
            check.checked,
            check.failures.len()
        ),
        check.failures.is_empty(),
    )];
    for n in sem
        .scale_values(depth)
        .into_iter()
        .filter(|n| *n > 1)
        .take(2)
    {
        let mut total = BigRational::zero();
        let mut exact = true;
        for f in sem.transversal(n)? {
            match ground_state_value(sem, &SpanningElement::range(f), &TraceSpec::Canonical)? {
                StateValue::Exact { value } => total += value,
                _ => exact = false,
            }
        }
        ev.push(Evidence::new(
            format!("ground state on Σ_{{f ∈ T_{n}}} e_{{fS}}"),
            "0, so it does not factor through Q_p",
            &total,
            exact && total.is_zero(),
        ));
    }
    items.push(item(
        "ground-states",
        "Ground states correspond to states on C*(S_c); a ground state is a KMS_∞-state if and only if it comes from a trace. No ground state factors through Q_p(S) or Q(S).",
        Status::Established,
        ev,
    ));

    Ok(Classification {
        instance: sem.name(),
        beta: beta.clone(),
        critical_beta: bc,
        admissibility,
        faithful,
        almost_free,
        finite_propagation,
        items,
    })
}
