use num_rational::BigRational;
use rlcm_analysis::{
    check_admissible, check_almost_free, check_faithful, check_propagation, kappa_table, ratio,
    ActionReport, Bounds, CheckResult, Verdict,
};
use rlcm_core::{Certificate, RightLcmSemigroup, SemigroupElement};
use rlcm_engine::{
    classify, critical_beta, ground_state_value, kms_value, monoid_elements, pow, trace_check,
    zeta, EngineError, SpanningElement, Status, Temperature, TraceSpec,
};
use rlcm_families::{build, Family};
use rlcm_rep::{build_rep, ground_state_check, verify_reconstruction, verify_relations};
use serde_json::{json, Value};

use crate::config::{parse_beta, parse_temperature, Command, JobConfig};
use crate::CliError;

/// A per-level table for CSV export.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub results: Vec<Value>,
    pub warnings: Vec<String>,
    /// Some check failed; the process exits with status 1.
    pub failed: bool,
    pub table: Option<Table>,
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn element(sem: &Family, field: &str, text: &str) -> Result<SemigroupElement, CliError> {
    sem.parse_element(text).map_err(|e| CliError::Validation {
        field: field.into(),
        constraint: e.to_string(),
    })
}

fn certificate(sem: &Family, c: &Option<Certificate>) -> Value {
    match c {
        None => Value::Null,
        Some(c) => json!({
            "holds": c.holds,
            "reason": c.reason,
            "witness": c.witness.as_ref().map(|(s, t)| [sem.format_element(s), sem.format_element(t)]),
        }),
    }
}

fn bounds(sem: &Family, cfg: &JobConfig) -> Bounds {
    let p = &cfg.parameters;
    let mut b = Bounds::for_instance(sem);
    if let Some(d) = p.depth {
        b = b.with_depth(d);
    }
    if let Some(w) = p.core_weight {
        b = b.with_core_weight(w);
    }
    b
}

pub fn execute(cfg: &JobConfig, command: Command) -> Result<Outcome, CliError> {
    let family = match &cfg.semigroup {
        Some(spec) => Some(build(spec)?),
        None => None,
    };
    if command == Command::Zeta {
        return zeta_command(family.as_ref(), cfg);
    }
    let sem = family.expect("validated");
    match command {
        Command::Describe => describe(&sem, cfg),
        Command::CheckAdmissible => admissible(&sem, cfg),
        Command::Action => action(&sem, cfg),
        Command::KmsEval => kms_eval(&sem, cfg),
        Command::Kappa => kappa(&sem, cfg),
        Command::Ground => ground(&sem, cfg),
        Command::Classify => classify_command(&sem, cfg),
        Command::VerifyRep => verify_rep(&sem, cfg),
        Command::Zeta => unreachable!(),
    }
}

fn describe(sem: &Family, cfg: &JobConfig) -> Result<Outcome, CliError> {
    let depth = bounds(sem, cfg).depth;
    let cf = sem.closed_forms();
    let mut levels = Vec::new();
    for n in sem.scale_values(depth) {
        levels.push(json!({"n": n, "size": sem.transversal(n)?.len()}));
    }
    let result = json!({
        "instance": sem.name(),
        "irreducible-scales": sem.irreducible_scales(),
        "generators": sem.generators().iter().map(|g| sem.format_element(g)).collect::<Vec<_>>(),
        "default-depth": Bounds::for_instance(sem).depth,
        "critical-beta": to_value(&critical_beta(sem)),
        "core": to_value(&sem.core_data()),
        "closed-forms": {
            "faithful": certificate(sem, &cf.faithful),
            "almost-free": certificate(sem, &cf.almost_free),
            "finite-propagation": certificate(sem, &cf.finite_propagation),
        },
        "ads-conditions": sem.ads_conditions().map(|c| to_value(&c)),
        "levels": levels,
    });
    Ok(Outcome {
        results: vec![result],
        ..Default::default()
    })
}

fn admissible(sem: &Family, cfg: &JobConfig) -> Result<Outcome, CliError> {
    let report = check_admissible(sem, &bounds(sem, cfg))?;
    let mut out = Outcome {
        failed: !report
            .checks()
            .iter()
            .all(|(_, c)| !matches!(c, CheckResult::Fail { .. })),
        ..Default::default()
    };
    for (name, c) in report.checks() {
        if let CheckResult::Exhausted { depth } = c {
            out.warnings
                .push(format!("{name} exhausted at depth {depth}"));
        }
    }
    out.results.push(to_value(&report));
    Ok(out)
}

fn action_warning(r: &ActionReport, out: &mut Outcome) {
    if let Verdict::UndecidedAtDepth { bound } = r.verdict {
        out.warnings.push(format!(
            "{} undecided at level {bound}",
            to_value(&r.property).as_str().unwrap_or_default()
        ));
    }
    if r.search_agrees == Some(false) {
        out.failed = true;
    }
}

fn action(sem: &Family, cfg: &JobConfig) -> Result<Outcome, CliError> {
    let p = &cfg.parameters;
    let b = bounds(sem, cfg);
    let level = p.level.unwrap_or(b.depth);
    let which = p.property.as_deref().unwrap_or("all");
    let mut reports = Vec::new();
    if matches!(which, "faithful" | "all") {
        reports.push(check_faithful(sem, b.core_weight, level)?);
    }
    if matches!(which, "almost-free" | "all") {
        reports.push(check_almost_free(sem, b.core_weight, level)?);
    }
    if matches!(which, "propagation" | "all") {
        reports.push(check_propagation(sem, b.core_weight, level)?);
    }
    let mut out = Outcome::default();
    let mut table = Table {
        header: vec!["property", "left", "right", "n", "count"],
        rows: Vec::new(),
    };
    for r in &reports {
        action_warning(r, &mut out);
        let prop = to_value(&r.property)
            .as_str()
            .unwrap_or_default()
            .to_string();
        for pair in &r.pairs {
            for (n, k) in &pair.fixed_counts {
                table.rows.push(vec![
                    prop.clone(),
                    pair.pair.0.clone(),
                    pair.pair.1.clone(),
                    n.to_string(),
                    k.to_string(),
                ]);
            }
        }
        for prop_data in &r.propagation {
            for (n, k) in &prop_data.sizes {
                table.rows.push(vec![
                    prop.clone(),
                    prop_data.element.clone(),
                    String::new(),
                    n.to_string(),
                    k.to_string(),
                ]);
            }
        }
        out.results.push(to_value(r));
    }
    out.table = Some(table);
    Ok(out)
}

fn zeta_command(sem: Option<&Family>, cfg: &JobConfig) -> Result<Outcome, CliError> {
    let p = &cfg.parameters;
    let index_set = match (&p.irr, sem) {
        (Some(irr), _) => irr.clone(),
        (None, Some(sem)) => sem.irreducible_scales(),
        (None, None) => unreachable!("validated"),
    };
    let beta = parse_beta(p.beta.as_deref().expect("validated"))?;
    let eval = zeta(&index_set, &beta)?;
    let mut out = Outcome::default();
    if !eval.converges {
        out.warnings.push(format!("ζ_I(β) diverges at β = {beta}"));
    }
    let mut result = to_value(&eval);
    if let Some(cutoff) = p.cutoff {
        if !beta.is_integer() {
            return Err(CliError::Validation {
                field: "cutoff".into(),
                constraint: "partial sums need an integer beta".into(),
            });
        }
        let k: i64 = beta
            .to_integer()
            .try_into()
            .map_err(|_| CliError::Validation {
                field: "beta".into(),
                constraint: "too large".into(),
            })?;
        let mut partial = BigRational::from_integer(0.into());
        let mut rows = Vec::new();
        let mut table = Table {
            header: vec!["n", "term_num", "term_den", "partial_num", "partial_den"],
            rows: Vec::new(),
        };
        for n in monoid_elements(&index_set, cutoff) {
            let term = pow(n, 1 - k);
            partial += &term;
            table.rows.push(vec![
                n.to_string(),
                term.numer().to_string(),
                term.denom().to_string(),
                partial.numer().to_string(),
                partial.denom().to_string(),
            ]);
            rows.push(json!({
                "n": n,
                "term": ratio_value(&term),
                "partial": ratio_value(&partial),
            }));
        }
        result["partial-sums"] = Value::Array(rows);
        if let Some(rlcm_engine::StateValue::Exact { value }) = &eval.value {
            result["tail"] = ratio_value(&(value - &partial));
        }
        out.table = Some(table);
    }
    out.results.push(result);
    Ok(out)
}

fn ratio_value(r: &BigRational) -> Value {
    ratio::serialize(r, serde_json::value::Serializer).expect("rationals serialize")
}

fn trace_spec(cfg: &JobConfig, default_level: u64) -> TraceSpec {
    match cfg.parameters.trace.as_deref() {
        Some("rho") => TraceSpec::Rho {
            level: cfg.parameters.level.unwrap_or(default_level),
        },
        _ => TraceSpec::Canonical,
    }
}

fn spanning(sem: &Family, cfg: &JobConfig) -> Result<SpanningElement, CliError> {
    let p = &cfg.parameters;
    Ok(SpanningElement::new(
        element(sem, "left", p.left.as_deref().expect("validated"))?,
        element(sem, "right", p.right.as_deref().expect("validated"))?,
    ))
}

fn kms_eval(sem: &Family, cfg: &JobConfig) -> Result<Outcome, CliError> {
    let p = &cfg.parameters;
    let depth = bounds(sem, cfg).depth;
    let beta = parse_beta(p.beta.as_deref().expect("validated"))?;
    let x = spanning(sem, cfg)?;
    let trace = trace_spec(cfg, depth);
    let cutoff = p.cutoff.unwrap_or(depth);
    let value = kms_value(sem, &beta, &x, &trace, cutoff)?;
    Ok(Outcome {
        results: vec![json!({
            "element": format!("v_{} v_{}*", sem.format_element(&x.left), sem.format_element(&x.right)),
            "beta": ratio_value(&beta),
            "trace": trace.name(),
            "cutoff": cutoff,
            "value": to_value(&value),
        })],
        ..Default::default()
    })
}

fn kappa(sem: &Family, cfg: &JobConfig) -> Result<Outcome, CliError> {
    let p = &cfg.parameters;
    let level = p.level.unwrap_or(bounds(sem, cfg).depth);
    let a = element(sem, "a", p.a.as_deref().expect("validated"))?;
    let b = element(sem, "b", p.b.as_deref().expect("validated"))?;
    let t = kappa_table(sem, &a, &b, level)?;
    let monotone = t.is_monotone();
    let mut result = to_value(&t);
    result["monotone"] = Value::Bool(monotone);
    result["width"] = ratio_value(&t.width());
    let table = Table {
        header: vec!["n", "kappa_num", "kappa_den", "exact", "class", "g_minus_t"],
        rows: t
            .levels
            .iter()
            .map(|l| {
                vec![
                    l.n.to_string(),
                    l.kappa.numer().to_string(),
                    l.kappa.denom().to_string(),
                    l.exact.to_string(),
                    l.class.to_string(),
                    l.g_minus_t.to_string(),
                ]
            })
            .collect(),
    };
    Ok(Outcome {
        results: vec![result],
        failed: !monotone,
        table: Some(table),
        ..Default::default()
    })
}

fn ground(sem: &Family, cfg: &JobConfig) -> Result<Outcome, CliError> {
    let x = spanning(sem, cfg)?;
    let trace = trace_spec(cfg, bounds(sem, cfg).depth);
    let value = ground_state_value(sem, &x, &trace)?;
    let mut out = Outcome::default();
    let mut result = json!({
        "element": format!("v_{} v_{}*", sem.format_element(&x.left), sem.format_element(&x.right)),
        "state": trace.name(),
        "value": to_value(&value),
    });
    if let Some(w) = cfg.parameters.core_weight {
        let check = trace_check(sem, &trace, w)?;
        out.failed = !check.failures.is_empty();
        result["trace-check"] = to_value(&check);
    }
    out.results.push(result);
    Ok(out)
}

fn classify_command(sem: &Family, cfg: &JobConfig) -> Result<Outcome, CliError> {
    let beta = parse_temperature(cfg.parameters.beta.as_deref().expect("validated"))?;
    let mut out = Outcome::default();
    match classify(sem, &beta, &bounds(sem, cfg)) {
        Ok(c) => {
            for item in &c.items {
                if item.status == Status::Undecided {
                    out.warnings.push(format!("{} undecided", item.key));
                }
            }
            out.failed = !c.evidence_ok();
            out.results.push(to_value(&c));
        }
        Err(EngineError::NotAdmissible { depth, failed }) => {
            out.failed = true;
            out.results.push(json!({
                "instance": sem.name(),
                "beta": match &beta {
                    Temperature::Finite(b) => ratio_value(b),
                    Temperature::Infinite => Value::from("infinity"),
                },
                "error": format!("not admissible at depth {depth}: {failed} failed"),
            }));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

fn verify_rep(sem: &Family, cfg: &JobConfig) -> Result<Outcome, CliError> {
    let p = &cfg.parameters;
    let beta = parse_beta(p.beta.as_deref().expect("validated"))?;
    let rep = build_rep(
        sem,
        &TraceSpec::Canonical,
        p.level_cap.expect("validated"),
        p.core_cap.expect("validated"),
    )?;
    let index_set = p
        .index_set
        .clone()
        .unwrap_or_else(|| sem.irreducible_scales());
    let samples = p.samples.unwrap_or(5);
    let relations = verify_relations(sem, &rep)?;
    let reconstruction = verify_reconstruction(sem, &rep, &beta, &index_set, p.tolerance, samples)?;
    let ground = ground_state_check(sem, &rep, samples)?;
    let mut out = Outcome {
        failed: !(relations.holds() && reconstruction.holds && ground.holds()),
        ..Default::default()
    };
    for c in &relations.checks {
        if c.checked == 0 {
            out.warnings.push(format!(
                "{}: no column decided inside the truncation",
                c.name
            ));
        }
    }
    out.results.push(json!({
        "representation": to_value(&rep.summary()),
        "relations": to_value(&relations),
        "reconstruction": to_value(&reconstruction),
        "ground-state": to_value(&ground),
    }));
    Ok(out)
}
