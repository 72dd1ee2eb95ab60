use num_rational::BigRational;
use rlcm_analysis::{
    alpha, alpha_inverse, alpha_kernel_witnesses, check_admissible, check_almost_free,
    check_faithful, check_propagation, fixed_sets, kappa_table, product_rule, Bounds, CheckResult,
    Verdict,
};
use rlcm_core::RightLcmSemigroup;
use rlcm_families::{build, Family, FamilySpec};

fn bs(c: u64, d: u64) -> Family {
    build(&FamilySpec::BaumslagSolitar { c, d }).unwrap()
}

fn nsp() -> Family {
    build(&FamilySpec::NSemidirectP { primes: vec![2, 3] }).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Normal form for `a b^c = b^d a` by rewriting `b^d a -> a b^c`.
fn bs_rewrite(c: usize, d: usize, word: &str) -> String {
    let from = format!("{}a", "b".repeat(d));
    let to = format!("a{}", "b".repeat(c));
    let mut w = word.to_string();
    while let Some(i) = w.find(&from) {
        w.replace_range(i..i + from.len(), &to);
    }
    w
}

/// The normal form with its trailing power of `b` removed.
fn bs_class(c: usize, d: usize, word: &str) -> String {
    bs_rewrite(c, d, word).trim_end_matches('b').to_string()
}

/// Digit words `b^j a` of length `k`, as raw strings.
fn digit_words(d: usize, k: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|w| (0..d).map(move |j| format!("{w}{}a", "b".repeat(j))))
            .collect();
    }
    out
}

#[test]
fn bs23_and_nsp_are_admissible() {
    let f = bs(2, 3);
    let r = check_admissible(&f, &Bounds::for_instance(&f).with_depth(27)).unwrap();
    assert!(r.all_pass(), "{r:?}");
    assert_eq!(r.irreducible_scales, vec![3]);

    let g = nsp();
    let r = check_admissible(&g, &Bounds::for_instance(&g).with_depth(36)).unwrap();
    assert!(r.all_pass(), "{r:?}");
    assert_eq!(r.irreducible_scales, vec![2, 3]);
}

#[test]
fn degenerate_bs_fails_admissibility_with_replayable_counterexample() {
    let f = bs(2, 1);
    let r = check_admissible(&f, &Bounds::for_instance(&f)).unwrap();
    let CheckResult::Fail { counterexample } = &r.a3a else {
        panic!("{r:?}")
    };
    for e in &counterexample.elements {
        f.parse_element(e).unwrap();
    }
}

#[test]
fn zero_depth_is_rejected() {
    let f = bs(2, 3);
    assert!(check_admissible(&f, &Bounds::for_instance(&f).with_depth(0)).is_err());
}

#[test]
fn alpha_examples() {
    let f = bs(2, 3);
    let b = f.parse_element("b").unwrap();
    let t = f.parse_element("b^2a").unwrap();
    assert_eq!(alpha(&f, &b, &t).unwrap(), f.parse_element("a").unwrap());
    assert_eq!(
        alpha_inverse(&f, &b, &f.parse_element("a").unwrap()).unwrap(),
        t
    );
    assert_eq!(alpha(&f, &f.identity(), &t).unwrap(), t);

    let g = nsp();
    // (1,1)(1,2) = (1 + 1, 2) = (2,2) = (0,2)(1,1)
    let got = alpha(
        &g,
        &g.parse_element("(1,1)").unwrap(),
        &g.parse_element("(1,2)").unwrap(),
    )
    .unwrap();
    assert_eq!(got, g.parse_element("(0,2)").unwrap());
}

#[test]
fn alpha_rejects_non_core_and_non_transversal() {
    let f = bs(2, 3);
    let a = f.parse_element("a").unwrap();
    assert!(alpha(&f, &a, &a).is_err());
    assert!(alpha(
        &f,
        &f.parse_element("b").unwrap(),
        &f.parse_element("ab").unwrap()
    )
    .is_err());
}

#[test]
fn bs33_fixed_sets_of_b3_against_rewriting() {
    let f = bs(3, 3);
    let b3 = f.parse_element("b^3").unwrap();
    let fs = fixed_sets(&f, &b3, &f.identity(), 3).unwrap();
    assert_eq!(fs.class.len(), 3);
    assert!(fs.exact.is_empty());
    for w in digit_words(3, 1) {
        assert_eq!(bs_class(3, 3, &format!("bbb{w}")), bs_class(3, 3, &w));
        assert_ne!(bs_rewrite(3, 3, &format!("bbb{w}")), bs_rewrite(3, 3, &w));
    }
}

#[test]
fn nsp_fixed_sets_against_enumeration() {
    let g = nsp();
    let fs = fixed_sets(
        &g,
        &g.parse_element("(2,1)").unwrap(),
        &g.parse_element("(0,1)").unwrap(),
        4,
    )
    .unwrap();
    assert!(fs.class.is_empty() && fs.exact.is_empty());
    assert!((0..4u64).all(|r| (2 + r) % 4 != r % 4));
}

#[test]
fn diagonal_fixed_sets_are_everything() {
    let g = nsp();
    let a = g.parse_element("(5,1)").unwrap();
    let fs = fixed_sets(&g, &a, &a, 6).unwrap();
    assert_eq!(fs.exact.len(), 6);
    assert_eq!(fs.class.len(), 6);
    assert!(fixed_sets(&g, &a, &a, 5).is_err());
}

#[test]
fn kappa_examples() {
    let f = bs(2, 3);
    let b = f.parse_element("b").unwrap();
    let b2 = f.parse_element("b^2").unwrap();
    let t = kappa_table(&f, &b, &b2, 9).unwrap();
    assert_eq!(t.deepest().n, 9);
    assert_eq!(t.deepest().kappa, q(0, 1));
    assert_eq!(t.enclosure, (q(0, 1), q(0, 1)));
    let oracle = digit_words(3, 2)
        .iter()
        .filter(|w| bs_class(2, 3, &format!("b{w}")) == bs_class(2, 3, &format!("bb{w}")))
        .count();
    assert_eq!(oracle, t.deepest().class);

    let d = kappa_table(&f, &b, &b, 27).unwrap();
    assert!(d.levels.iter().all(|l| l.kappa == q(1, 1)));

    let g = bs(3, 3);
    let b3 = g.parse_element("b^3").unwrap();
    let t = kappa_table(&g, &b3, &g.identity(), 9).unwrap();
    assert_eq!(t.deepest().kappa, q(0, 1));
    assert_eq!(t.enclosure, (q(0, 1), q(1, 1)));
    assert!(t.is_monotone());
}

#[test]
fn kappa_table_serializes_rationals_as_pairs() {
    let f = bs(3, 3);
    let t = kappa_table(&f, &f.parse_element("b^3").unwrap(), &f.identity(), 9).unwrap();
    let v = serde_json::to_value(&t).unwrap();
    assert_eq!(
        v["enclosure"]["hi"],
        serde_json::json!({"num": 1, "den": 1})
    );
    assert_eq!(
        v["levels"][0]["kappa"],
        serde_json::json!({"num": 0, "den": 1})
    );
    assert_eq!(v["levels"][0]["g_minus_t"], 1);
}

#[test]
fn product_rule_on_nontrivial_defects() {
    let g = bs(3, 3);
    let r = product_rule(&g, &g.parse_element("b^3").unwrap(), &g.identity(), 27).unwrap();
    assert_eq!(r.checked, vec![(3, 3), (3, 9), (9, 3)]);
    assert!(r.holds());

    let f = bs(2, 3);
    assert!(
        product_rule(&f, &f.parse_element("b^3").unwrap(), &f.identity(), 27)
            .unwrap()
            .holds()
    );
    let n = nsp();
    let r = product_rule(&n, &n.parse_element("(6,1)").unwrap(), &n.identity(), 36).unwrap();
    assert!(r.holds() && !r.checked.is_empty());
}

#[test]
fn bs33_is_not_faithful() {
    let f = bs(3, 3);
    let r = check_faithful(&f, 6, 27).unwrap();
    let Verdict::Violated { witness, .. } = &r.verdict else {
        panic!("{r:?}")
    };
    assert_eq!(
        witness.as_ref().unwrap(),
        &("b^3".to_string(), "1".to_string())
    );
    assert_eq!(r.search_agrees, Some(true));
}

#[test]
fn bs23_propagation_of_b() {
    let f = bs(2, 3);
    let r = check_propagation(&f, 1, 27).unwrap();
    assert!(matches!(r.verdict, Verdict::Holds { .. }));
    let p = &r.propagation[0];
    assert_eq!(p.element, "b");
    assert_eq!(p.set, vec!["1".to_string(), "b^2".to_string()]);
    assert!(p.stabilized);
    // restriction closure: b^m (b^j a) = b^{m+j} a with carry (m + j) div 3 times 2
    let mut closure = std::collections::BTreeSet::new();
    let mut frontier = vec![1u64];
    while let Some(m) = frontier.pop() {
        for j in 0..3 {
            let next = (m + j) / 3 * 2;
            if closure.insert(next) {
                frontier.push(next);
            }
        }
    }
    assert_eq!(closure, [0, 2].into());
}

#[test]
fn bs32_propagation_of_b2_grows() {
    let f = bs(3, 2);
    let r = check_propagation(&f, 2, 8).unwrap();
    assert!(matches!(r.verdict, Verdict::Violated { .. }));
    let p = r.propagation.iter().find(|p| p.element == "b^2").unwrap();
    assert!(!p.stabilized && !p.weight_bounded);
    let sizes: Vec<usize> = p.sizes.iter().map(|x| x.1).collect();
    assert_eq!(
        p.sizes.iter().map(|x| x.0).collect::<Vec<_>>(),
        vec![2, 4, 8]
    );
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(r.search_agrees, Some(true));
}

#[test]
fn kernel_witness_examples() {
    let f = bs(4, 2);
    let w = alpha_kernel_witnesses(&f, 6, 8).unwrap();
    assert!(w.contains(&(f.parse_element("b^2").unwrap(), f.identity())));

    assert!(alpha_kernel_witnesses(&bs(2, 3), 6, 27).unwrap().is_empty());

    let g = build(&FamilySpec::EasyArtin { m: 2, n: 1 }).unwrap();
    let w = alpha_kernel_witnesses(&g, 6, 8).unwrap();
    assert!(w.contains(&(g.parse_element("z0").unwrap(), g.identity())));
}

#[test]
fn bs_grid_matches_closed_forms_and_search() {
    for c in 1..=6u64 {
        for d in 1..=6u64 {
            if c * d == 1 {
                continue;
            }
            let f = bs(c, d);
            let level = Bounds::for_instance(&f).depth;
            let free = c % d != 0;
            for (r, expect) in [
                (check_faithful(&f, 6, level).unwrap(), free),
                (check_almost_free(&f, 6, level).unwrap(), free),
                (check_propagation(&f, 6, level).unwrap(), c <= d),
            ] {
                assert_eq!(
                    r.verdict.holds(),
                    Some(expect),
                    "BS({c},{d}) {:?}",
                    r.property
                );
                assert_eq!(r.search_agrees, Some(true), "BS({c},{d}) {:?}", r.property);
            }
        }
    }
}

#[test]
fn adding_machine_almost_freeness_is_left_undecided() {
    let f = build(&FamilySpec::adding_machine()).unwrap();
    let r = check_almost_free(&f, 6, 8).unwrap();
    assert_eq!(r.verdict, Verdict::UndecidedAtDepth { bound: 8 });
    assert_eq!(r.search_agrees, None);
}

#[test]
fn shipped_families_are_admissible_at_default_depth() {
    let specs = [
        FamilySpec::EasyArtin { m: 2, n: 1 },
        FamilySpec::adding_machine(),
        FamilySpec::DilationMatrix {
            d: 1,
            a: vec![vec![2]],
        },
        FamilySpec::FiniteFieldShift {
            q: 2,
            f_degree: 1,
            f: None,
        },
        FamilySpec::BaumslagSolitar { c: 2, d: 4 },
    ];
    for spec in specs {
        let f = build(&spec).unwrap();
        let r = check_admissible(&f, &Bounds::for_instance(&f)).unwrap();
        assert!(r.all_pass(), "{}: {r:?}", f.name());
    }
}
