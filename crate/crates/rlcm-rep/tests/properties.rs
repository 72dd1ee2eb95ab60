use num_rational::BigRational;
use proptest::prelude::*;
use rlcm_core::sample::factored_elements;
use rlcm_engine::{kms_value, SpanningElement, TraceSpec};
use rlcm_families::{build, Family, FamilySpec};
use rlcm_rep::{build_rep, state_value, verify_relations, Entry};

fn specs() -> Vec<FamilySpec> {
    vec![
        FamilySpec::BaumslagSolitar { c: 2, d: 3 },
        FamilySpec::BaumslagSolitar { c: 3, d: 3 },
        FamilySpec::BaumslagSolitar { c: 3, d: 2 },
        FamilySpec::NSemidirectP { primes: vec![2, 3] },
        FamilySpec::EasyArtin { m: 2, n: 1 },
    ]
}

fn family(i: usize) -> Family {
    build(&specs()[i % specs().len()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operators_are_partial_permutations(fi in 0usize..5, si in 0usize..100, cap in 1u32..3) {
        let f = family(fi);
        let rep = build_rep(&f, &TraceSpec::Canonical, 12, cap).unwrap();
        let elems = factored_elements(&f, 9, 1).unwrap();
        let s = &elems[si % elems.len()];
        let op = rep.operator(&f, s).unwrap();
        let mut rows = std::collections::BTreeSet::new();
        for e in &op.columns {
            prop_assert_ne!(*e, Entry::Zero);
            if let Entry::Basis(i) = e {
                prop_assert!(rows.insert(*i));
            }
        }
    }

    #[test]
    fn relations_hold_for_every_cap(fi in 0usize..5, level in 1u64..28, cap in 1u32..3) {
        let f = family(fi);
        let rep = build_rep(&f, &TraceSpec::Canonical, level, cap).unwrap();
        let report = verify_relations(&f, &rep).unwrap();
        prop_assert!(report.holds(), "{:?}", report.checks);
    }

    #[test]
    fn rep_state_agrees_with_engine(fi in 0usize..5, i in 0usize..200, j in 0usize..200) {
        let f = family(fi);
        let rep = build_rep(&f, &TraceSpec::Canonical, 27, 2).unwrap();
        let elems = factored_elements(&f, 9, 1).unwrap();
        let x = SpanningElement::new(elems[i % elems.len()].clone(), elems[j % elems.len()].clone());
        let beta = BigRational::from_integer(2.into());
        let got = state_value(&f, &rep, &beta, &x).unwrap();
        let engine = kms_value(&f, &beta, &x, &TraceSpec::Canonical, 729).unwrap();
        let value = got.value.as_exact().unwrap().clone();
        let excluded = got.excluded_mass.as_exact().unwrap().clone();
        let (lo, hi) = match &engine {
            rlcm_engine::StateValue::Exact { value } => (value.clone(), value.clone()),
            rlcm_engine::StateValue::Enclosure { lo, hi, .. } => (lo.clone(), hi.clone()),
            other => panic!("{other:?}"),
        };
        prop_assert!(value <= hi, "{:?} above {:?}", got, engine);
        let slack = BigRational::from_float(got.unresolved_mass).unwrap();
        prop_assert!(lo - &value <= excluded + slack, "{:?} vs {:?}", got, engine);
    }
}
