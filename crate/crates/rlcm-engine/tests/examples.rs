use num_rational::BigRational;
use rlcm_analysis::Bounds;
use rlcm_core::RightLcmSemigroup;
use rlcm_engine::{
    boundary_factoring, classify, critical_beta, foundation_sum, ground_state_value, kms_value,
    monoid_elements, sample_spanning, trace_check, zeta, zeta_partial_sum, EngineError,
    SpanningElement, StateValue, Status, Temperature, TraceSpec,
};
use rlcm_families::{build, Family, FamilySpec};

fn bs(c: u64, d: u64) -> Family {
    build(&FamilySpec::BaumslagSolitar { c, d }).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(n: i64) -> BigRational {
    q(n, 1)
}

fn exact(v: &StateValue) -> BigRational {
    v.as_exact()
        .cloned()
        .unwrap_or_else(|| panic!("not exact: {v:?}"))
}

fn el(f: &Family, s: &str) -> rlcm_core::SemigroupElement {
    f.parse_element(s).unwrap()
}

#[test]
fn zeta_examples_with_partial_sum_oracle() {
    let z = zeta(&[2], &int(2)).unwrap();
    assert_eq!(exact(z.value.as_ref().unwrap()), int(2));
    // 1 + 1/2 + ... + 1/2^20
    let geometric = (0..=20).fold(int(0), |acc, k| acc + q(1, 1 << k));
    assert_eq!(zeta_partial_sum(&[2], 2, 1 << 20), geometric);
    assert!(geometric < int(2) && int(2) - &geometric == q(1, 1 << 20));

    let z = zeta(&[2, 3], &int(3)).unwrap();
    assert_eq!(exact(z.value.as_ref().unwrap()), q(3, 2));
    let mut oracle = int(0);
    for n in 1..=10_000u64 {
        let mut m = n;
        for p in [2, 3] {
            while m % p == 0 {
                m /= p;
            }
        }
        if m == 1 {
            oracle += q(1, (n * n) as i64);
        }
    }
    assert_eq!(zeta_partial_sum(&[2, 3], 3, 10_000), oracle);
    assert!(oracle < q(3, 2));

    for beta in [int(1), int(5), q(7, 3)] {
        let z = zeta(&[], &beta).unwrap();
        assert_eq!(exact(z.value.as_ref().unwrap()), int(1));
    }
    let pole = zeta(&[2], &int(1)).unwrap();
    assert!(!pole.converges && pole.value.is_none());
}

#[test]
fn critical_beta_is_one_for_finite_irr() {
    assert_eq!(critical_beta(&bs(2, 3)).value, int(1));
    assert_eq!(critical_beta(&bs(2, 1)).value, int(1));
    assert_eq!(monoid_elements(&[3], 27), vec![1, 3, 9, 27]);
}

#[test]
fn kms_value_examples() {
    let f = bs(2, 3);
    let a = el(&f, "a");
    let v = kms_value(
        &f,
        &int(2),
        &SpanningElement::range(a.clone()),
        &TraceSpec::Canonical,
        27,
    )
    .unwrap();
    assert_eq!(exact(&v), q(1, 9));

    let x = SpanningElement::new(a.clone(), el(&f, "ba"));
    assert_eq!(
        exact(&kms_value(&f, &int(2), &x, &TraceSpec::Canonical, 27).unwrap()),
        int(0)
    );

    let x = SpanningElement::new(el(&f, "b"), f.identity());
    let v = kms_value(&f, &int(2), &x, &TraceSpec::Canonical, 81).unwrap();
    let StateValue::Enclosure { lo, hi, truncation } = &v else {
        panic!("{v:?}")
    };
    assert_eq!(*lo, int(0));
    let tail = &truncation.as_ref().unwrap().tail_bound;
    assert!(hi - lo <= *tail);
    // ζ_S(2) = 3/2 and the levels up to 81 carry mass 1 + 1/3 + ... + 1/81
    assert_eq!(
        *tail,
        q(3, 2) - (0..=4).fold(int(0), |acc, k| acc + q(1, 3i64.pow(k)))
    );
}

#[test]
fn below_one_is_refused() {
    let f = bs(2, 3);
    let x = SpanningElement::range(f.identity());
    let err = kms_value(&f, &q(1, 2), &x, &TraceSpec::Canonical, 9).unwrap_err();
    assert!(matches!(err, EngineError::BelowOne { .. }));
    assert!(err.to_string().contains("no KMS"));
    assert!(matches!(
        foundation_sum(&f, &q(1, 2), 3),
        Err(EngineError::BelowOne { .. })
    ));
}

#[test]
fn ground_state_examples() {
    let f = bs(2, 3);
    let e_a = SpanningElement::range(el(&f, "a"));
    assert_eq!(
        exact(&ground_state_value(&f, &e_a, &TraceSpec::Canonical).unwrap()),
        int(0)
    );
    let e_b = SpanningElement::range(el(&f, "b"));
    assert_eq!(
        exact(&ground_state_value(&f, &e_b, &TraceSpec::Canonical).unwrap()),
        int(1)
    );
    let one = SpanningElement::range(f.identity());
    assert_eq!(
        exact(&ground_state_value(&f, &one, &TraceSpec::Canonical).unwrap()),
        int(1)
    );
}

#[test]
fn foundation_sums_and_boundary_factoring() {
    let f = bs(2, 3);
    assert_eq!(exact(&foundation_sum(&f, &int(2), 3).unwrap()), q(1, 3));
    assert_eq!(exact(&foundation_sum(&f, &int(1), 3).unwrap()), int(1));
    let r = boundary_factoring(&f, &int(2), 27, 3).unwrap();
    assert!(r.factors_through_qc && !r.factors_through_qp);
    let r = boundary_factoring(&f, &int(1), 27, 3).unwrap();
    assert!(r.factors_through_qc && r.factors_through_qp);
}

#[test]
fn rho_agrees_with_canonical_for_bs23() {
    let f = bs(2, 3);
    for x in sample_spanning(&f, 27, 40).unwrap() {
        let canonical = kms_value(&f, &int(1), &x, &TraceSpec::Canonical, 27).unwrap();
        let rho = kms_value(&f, &int(1), &x, &TraceSpec::Rho { level: 27 }, 27).unwrap();
        assert_eq!(canonical, rho);
    }
}

#[test]
fn rho_on_bs33_is_an_interval() {
    let f = bs(3, 3);
    let x = SpanningElement::new(el(&f, "b^3"), f.identity());
    let v = kms_value(&f, &int(1), &x, &TraceSpec::Rho { level: 9 }, 9).unwrap();
    assert_eq!(v.bounds_f64(), (0.0, 1.0));
    assert!(kms_value(&f, &int(1), &x, &TraceSpec::Canonical, 9).is_err());
}

#[test]
fn table_trace_enters_the_series() {
    let f = bs(3, 3);
    let (b3, one) = (el(&f, "b^3"), f.identity());
    let x = SpanningElement::new(b3.clone(), one.clone());
    let canonical = kms_value(&f, &int(2), &x, &TraceSpec::Canonical, 27).unwrap();
    let table = TraceSpec::Table(vec![(b3.clone(), one.clone(), q(1, 2))]);
    let v = kms_value(&f, &int(2), &x, &table, 27).unwrap();
    // level 1 contributes τ(w_{b^3} w_1^*) = 1/2 with weight 1 / ζ(2) = 2/3
    assert!(v.contains(&q(1, 3)) || v.bounds_f64().0 > canonical.bounds_f64().1);
    let bad = TraceSpec::Table(vec![(b3, one, int(2))]);
    assert!(kms_value(&f, &int(2), &x, &bad, 27).is_err());
}

#[test]
fn fractional_beta_is_approximate_within_budget() {
    let f = bs(2, 3);
    let v = kms_value(
        &f,
        &q(5, 2),
        &SpanningElement::range(el(&f, "a")),
        &TraceSpec::Canonical,
        27,
    )
    .unwrap();
    let StateValue::Approximate {
        value,
        lo,
        hi,
        rounding_error,
        ..
    } = v
    else {
        panic!()
    };
    let target = 3f64.powf(-2.5);
    assert!(lo <= target && target <= hi);
    assert!((value - target).abs() < 1e-12 && rounding_error < 1e-12);
}

#[test]
fn canonical_trace_is_tracial_on_core_products() {
    for f in [bs(2, 3), build(&FamilySpec::adding_machine()).unwrap()] {
        let c = trace_check(&f, &TraceSpec::Canonical, 2).unwrap();
        assert!(c.failures.is_empty() && c.checked > 0, "{c:?}");
    }
}

#[test]
fn classify_examples() {
    let f = bs(2, 3);
    let c = classify(&f, &Temperature::Finite(int(1)), &Bounds::for_instance(&f)).unwrap();
    let u = c.item("uniqueness").unwrap();
    assert_eq!(u.status, Status::Established);
    assert!(u.routes.iter().any(|r| r.starts_with("2a")));
    assert!(c.evidence_ok(), "{:#?}", c.items);

    let g = bs(3, 3);
    let c = classify(&g, &Temperature::Finite(int(2)), &Bounds::for_instance(&g)).unwrap();
    let u = c.item("uniqueness").unwrap();
    assert_eq!(u.status, Status::Undecided);
    assert!(u.evidence.iter().any(|e| e.observed.contains("b^3")));
    assert!(c.evidence_ok());

    let h = build(&FamilySpec::FiniteFieldShift {
        q: 2,
        f_degree: 1,
        f: None,
    })
    .unwrap();
    let c = classify(&h, &Temperature::Infinite, &Bounds::for_instance(&h)).unwrap();
    let u = c.item("uniqueness").unwrap();
    assert!(u.routes.iter().any(|r| r.starts_with("2b")));
    assert!(c.evidence_ok(), "{:#?}", c.items);
}

#[test]
fn classify_refuses_non_admissible_instances() {
    let f = bs(2, 1);
    assert!(matches!(
        classify(&f, &Temperature::Finite(int(1)), &Bounds::for_instance(&f)),
        Err(EngineError::NotAdmissible { .. })
    ));
}

#[test]
fn state_values_serialize_as_rational_pairs() {
    let v = StateValue::enclosure(q(1, 3), q(1, 2), None);
    let json = serde_json::to_value(&v).unwrap();
    assert_eq!(json["kind"], "enclosure");
    assert_eq!(json["lo"], serde_json::json!({"num": 1, "den": 3}));
}
