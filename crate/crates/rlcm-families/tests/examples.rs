use std::collections::BTreeSet;

use rlcm_core::{Divisibility, LcmOutcome, RightLcmSemigroup};
use rlcm_families::{build, BuildError, Family, FamilySpec, MealyAutomaton};

fn bs(c: u64, d: u64) -> Family {
    build(&FamilySpec::BaumslagSolitar { c, d }).unwrap()
}

fn nsp() -> Family {
    build(&FamilySpec::NSemidirectP { primes: vec![2, 3] }).unwrap()
}

fn z2() -> Family {
    build(&FamilySpec::DilationMatrix {
        d: 1,
        a: vec![vec![2]],
    })
    .unwrap()
}

/// Normal form of a word over {a, b} for `a b^c = b^d a`, by rewriting
/// `b^d a -> a b^c` until no occurrence is left.
fn bs_rewrite(c: usize, d: usize, word: &str) -> String {
    let from = format!("{}a", "b".repeat(d));
    let to = format!("a{}", "b".repeat(c));
    let mut w = word.to_string();
    while let Some(i) = w.find(&from) {
        w.replace_range(i..i + from.len(), &to);
    }
    w
}

fn expand(word: &str) -> String {
    // expands b^k into repeated letters
    let mut out = String::new();
    let chars: Vec<char> = word.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        i += 1;
        if i < chars.len() && chars[i] == '^' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let k: usize = chars[start..j].iter().collect::<String>().parse().unwrap();
            out.push_str(&ch.to_string().repeat(k));
            i = j;
        } else if ch != '1' {
            out.push(ch);
        }
    }
    out
}

/// All words over {a, b} up to `len`, as raw strings.
fn raw_words(len: usize) -> Vec<String> {
    let mut all = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for ch in ['a', 'b'] {
                next.push(format!("{w}{ch}"));
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

#[test]
fn bs_multiplication_matches_rewriting() {
    let f = bs(2, 3);
    let a = f.parse_element("a").unwrap();
    let b3 = f.parse_element("b^3").unwrap();
    assert_eq!(f.format_element(&f.multiply(&a, &b3).unwrap()), "ab^3");
    let ab3 = f.parse_element("ab^3").unwrap();
    let got = f.multiply(&ab3, &a).unwrap();
    assert_eq!(expand(&f.format_element(&got)), bs_rewrite(2, 3, "abbba"));
    assert_eq!(got, f.parse_element("aab^2").unwrap());
}

#[test]
fn bs_normal_forms_agree_with_rewriting_on_short_words() {
    for (c, d) in [(2, 3), (3, 2), (2, 2)] {
        let f = bs(c as u64, d as u64);
        for w in raw_words(8) {
            let e = if w.is_empty() {
                f.identity()
            } else {
                f.parse_element(&w).unwrap()
            };
            assert_eq!(
                expand(&f.format_element(&e)),
                bs_rewrite(c, d, &w),
                "BS({c},{d}) word {w}"
            );
        }
    }
}

#[test]
fn nsp_multiplication() {
    let f = nsp();
    let x = f.parse_element("(1,2)").unwrap();
    let y = f.parse_element("(1,3)").unwrap();
    assert_eq!(
        f.multiply(&x, &y).unwrap(),
        f.parse_element("(3,6)").unwrap()
    );
}

#[test]
fn nsp_lcm_examples() {
    let f = nsp();
    let p = |s: &str| f.parse_element(s).unwrap();
    assert!(f.right_lcm(&p("(0,2)"), &p("(1,2)")).unwrap().is_disjoint());
    let out = f.right_lcm(&p("(0,2)"), &p("(1,3)")).unwrap();
    // CRT oracle: least m with m ≡ 0 mod 2 and m ≡ 1 mod 3
    let m = (0u64..).find(|m| m % 2 == 0 && m % 3 == 1).unwrap();
    assert_eq!(
        out.lcm().unwrap(),
        &f.parse_element(&format!("({m},6)")).unwrap()
    );
}

#[test]
fn bs_lcm_of_b_and_a_by_ideal_enumeration() {
    let f = bs(2, 3);
    let b = f.parse_element("b").unwrap();
    let a = f.parse_element("a").unwrap();
    let words: Vec<_> = raw_words(6)
        .into_iter()
        .map(|w| {
            if w.is_empty() {
                f.identity()
            } else {
                f.parse_element(&w).unwrap()
            }
        })
        .collect();
    let bi: BTreeSet<_> = words.iter().map(|x| f.multiply(&b, x).unwrap()).collect();
    let ai: BTreeSet<_> = words.iter().map(|x| f.multiply(&a, x).unwrap()).collect();
    let common: Vec<_> = bi.intersection(&ai).cloned().collect();
    let least = common.iter().find(|r| {
        common
            .iter()
            .all(|z| words.iter().any(|x| f.multiply(r, x).unwrap() == *z))
    });
    let out = f.right_lcm(&b, &a).unwrap();
    assert_eq!(out.lcm(), least);
    assert_eq!(out.lcm().unwrap(), &f.parse_element("ab^2").unwrap());
    assert_eq!(out.lcm().unwrap(), &f.parse_element("b^3a").unwrap());
}

#[test]
fn left_division_examples() {
    let f = bs(2, 3);
    let p = |s: &str| f.parse_element(s).unwrap();
    assert_eq!(
        f.left_divide(&p("b"), &p("b^2a"), 0).unwrap().quotient(),
        Some(&p("ba"))
    );
    // ideal membership oracle: b is not a times anything of length <= 6
    let words = raw_words(6);
    assert!(!words.iter().any(|w| {
        let x = if w.is_empty() { f.identity() } else { p(w) };
        f.multiply(&p("a"), &x).unwrap() == p("b")
    }));
    assert_eq!(
        f.left_divide(&p("a"), &p("b"), 0).unwrap(),
        Divisibility::NotDivisible
    );
    let g = nsp();
    let q = |s: &str| g.parse_element(s).unwrap();
    assert_eq!(
        g.left_divide(&q("(0,2)"), &q("(4,6)"), 0)
            .unwrap()
            .quotient(),
        Some(&q("(2,3)"))
    );
}

#[test]
fn scale_examples() {
    let f = bs(2, 3);
    assert_eq!(f.scale(&f.parse_element("a").unwrap()).unwrap().get(), 3);
    assert_eq!(f.scale(&f.identity()).unwrap().get(), 1);
    let z = z2();
    assert_eq!(
        z.scale(&z.parse_element("(5,3)").unwrap()).unwrap().get(),
        8
    );
}

#[test]
fn core_and_unit_examples() {
    let f = bs(2, 3);
    assert!(f.is_core(&f.parse_element("b^5").unwrap()).unwrap());
    assert!(f.is_unit(&f.identity()).unwrap());
    assert!(!f.is_unit(&f.parse_element("b").unwrap()).unwrap());
    let ffs = build(&FamilySpec::FiniteFieldShift {
        q: 2,
        f_degree: 1,
        f: None,
    })
    .unwrap();
    for g in ["(0; 0)", "(1 0 1; 0)", "(1 1 1 1; 0)"] {
        let e = ffs.parse_element(g).unwrap();
        assert!(ffs.is_core(&e).unwrap());
        assert!(ffs.is_unit(&e).unwrap());
    }
}

#[test]
fn factor_examples() {
    let g = nsp();
    let fac = g.factor(&g.parse_element("(7,3)").unwrap()).unwrap();
    assert_eq!(fac.transversal_part, g.parse_element("(1,3)").unwrap());
    assert_eq!(fac.core_part, g.parse_element("(2,1)").unwrap());
    let f = bs(2, 3);
    let fac = f.factor(&f.parse_element("b^3a").unwrap()).unwrap();
    assert_eq!(fac.transversal_part, f.parse_element("a").unwrap());
    assert_eq!(fac.core_part, f.parse_element("b^2").unwrap());
    let fac = f.factor(&f.identity()).unwrap();
    assert_eq!(
        (fac.transversal_part, fac.core_part),
        (f.identity(), f.identity())
    );
}

#[test]
fn core_equivalence_examples() {
    let f = bs(2, 3);
    let p = |s: &str| f.parse_element(s).unwrap();
    assert!(f.core_equivalent(&p("b^3a"), &p("a")).unwrap());
    assert!(f.core_equivalent(&p("ab"), &p("ab")).unwrap());
    assert!(!f.core_equivalent(&p("a"), &p("ba")).unwrap());
    assert!(f.right_lcm(&p("a"), &p("ba")).unwrap().is_disjoint());
}

#[test]
fn transversal_examples() {
    let f = bs(2, 3);
    let t: Vec<String> = f
        .transversal(3)
        .unwrap()
        .iter()
        .map(|e| f.format_element(e))
        .collect();
    assert_eq!(t, vec!["a", "ba", "b^2a"]);
    assert_eq!(f.transversal(1).unwrap(), vec![f.identity()]);
    assert!(f.transversal(2).unwrap().is_empty());
    let z = z2();
    let t: Vec<String> = z
        .transversal(4)
        .unwrap()
        .iter()
        .map(|e| z.format_element(e))
        .collect();
    // digit oracle: least nonnegative coset representatives of Z/4Z
    let oracle: Vec<String> = (0..4).map(|r| format!("({r},2)")).collect();
    assert_eq!(t, oracle);
}

#[test]
fn core_enumeration_examples() {
    let f = bs(3, 5);
    let core: Vec<String> = f
        .enumerate_core(2)
        .unwrap()
        .iter()
        .map(|e| f.format_element(e))
        .collect();
    assert_eq!(core, vec!["1", "b", "b^2"]);
    let art = build(&FamilySpec::EasyArtin { m: 2, n: 1 }).unwrap();
    let core: Vec<String> = art
        .enumerate_core(1)
        .unwrap()
        .iter()
        .map(|e| art.format_element(e))
        .collect();
    assert_eq!(core, vec!["1", "z0"]);
    assert_eq!(f.enumerate_core(0).unwrap(), vec![f.identity()]);
}

#[test]
fn build_reports_irreducible_scales() {
    assert_eq!(bs(2, 3).irreducible_scales(), vec![3]);
    assert_eq!(z2().irreducible_scales(), vec![2]);
    assert_eq!(nsp().irreducible_scales(), vec![2, 3]);
}

#[test]
fn build_rejects_invalid_parameters() {
    let bad = [
        FamilySpec::BaumslagSolitar { c: 1, d: 1 },
        FamilySpec::DilationMatrix {
            d: 1,
            a: vec![vec![-1]],
        },
        FamilySpec::NSemidirectP { primes: vec![2, 6] },
        FamilySpec::FreeMonoid { m: 1 },
        FamilySpec::EasyArtin { m: 1, n: 3 },
        FamilySpec::FiniteFieldShift {
            q: 10,
            f_degree: 1,
            f: None,
        },
    ];
    for spec in bad {
        let err = build(&spec).unwrap_err();
        assert!(
            matches!(err, BuildError::Invalid { .. }),
            "{spec:?} gave {err:?}"
        );
    }
    let mut m = MealyAutomaton::adding_machine();
    m.states[1].output = vec![1, 1];
    assert!(build(&FamilySpec::SelfSimilar { automaton: m }).is_err());
}

#[test]
fn zs_action_examples() {
    let f = bs(2, 3);
    let p = |s: &str| f.parse_element(s).unwrap();
    assert_eq!(f.zs_action(&p("b"), &p("b^2a")).unwrap(), p("a"));
    assert_eq!(f.zs_restriction(&p("b"), &p("b^2a")).unwrap(), p("b^2"));
    let g = nsp();
    let q = |s: &str| g.parse_element(s).unwrap();
    assert_eq!(g.zs_action(&q("(2,1)"), &q("(1,2)")).unwrap(), q("(1,2)"));
    assert_eq!(
        g.zs_restriction(&q("(2,1)"), &q("(1,2)")).unwrap(),
        q("(1,1)")
    );
    assert_eq!(f.zs_action(&f.identity(), &p("ba")).unwrap(), p("ba"));
    assert!(f.zs_action(&p("a"), &p("a")).is_err());
}

#[test]
fn zs_lcm_examples() {
    let f = build(&FamilySpec::baumslag_solitar_as_zappa_szep(2, 3)).unwrap();
    let p = |s: &str| f.parse_element(s).unwrap();
    // z0 is b, x_j is b^j a
    let out = f.right_lcm(&p("z0"), &p("x0")).unwrap();
    assert_eq!(out.lcm().unwrap(), &p("x0 z0^2"));
    let s = p("x1 z0");
    match f.right_lcm(&s, &s).unwrap() {
        LcmOutcome::Lcm {
            lcm,
            left_complement,
            right_complement,
        } => {
            assert_eq!(lcm, s);
            assert_eq!(left_complement, f.identity());
            assert_eq!(right_complement, f.identity());
        }
        LcmOutcome::Disjoint => panic!("equal inputs are never disjoint"),
    }
    assert!(f.right_lcm(&p("x0"), &p("x1")).unwrap().is_disjoint());
}

#[test]
fn zs_refuses_free_right_factor() {
    let spec = FamilySpec::ZappaSzep {
        u: Box::new(FamilySpec::FreeMonoid { m: 2 }),
        a: Box::new(FamilySpec::FreeMonoid { m: 2 }),
        action: vec![vec![0, 1], vec![0, 1]],
        restriction: vec![vec![vec![0, 0]; 2]; 2],
    };
    assert!(matches!(
        build(&spec),
        Err(BuildError::NotLeftReversible(_))
    ));
}

#[test]
fn core_data_descriptions() {
    assert!(bs(2, 3).core_data().core.contains("powers of b"));
    let ss = build(&FamilySpec::adding_machine()).unwrap();
    assert!(ss.core_data().core.contains('G'));
    let art = build(&FamilySpec::EasyArtin { m: 2, n: 2 }).unwrap();
    assert!(art.core_data().core.contains("N^n"));
}

#[test]
fn ads_ideal_examples() {
    let z = z2();
    let p = |s: &str| z.parse_element(s).unwrap();
    // lattice oracle: 1 - 0 is odd, so not in 2Z
    assert!(z
        .ads_ideal_test(&p("(0,1)"), &p("(1,1)"))
        .unwrap()
        .is_disjoint());
    let s = p("(3,2)");
    assert_eq!(z.ads_ideal_test(&s, &s).unwrap().lcm(), Some(&s));
    // (0,1)S = {(2x, n)}, (1,2)S = {(1 + 4y, n)}: no even number is 1 mod 4
    let evens: BTreeSet<i64> = (-20..20).map(|x| 2 * x).collect();
    let odds: BTreeSet<i64> = (-10..10).map(|y| 1 + 4 * y).collect();
    assert!(evens.is_disjoint(&odds));
    assert!(z
        .ads_ideal_test(&p("(0,1)"), &p("(1,2)"))
        .unwrap()
        .is_disjoint());
    assert_eq!(
        z.ads_ideal_test(&p("(0,1)"), &p("(2,2)")).unwrap().lcm(),
        Some(&p("(2,2)"))
    );
    assert!(bs(2, 3).ads_ideal_test(&p_bs("a"), &p_bs("a")).is_err());
}

fn p_bs(s: &str) -> rlcm_core::SemigroupElement {
    bs(2, 3).parse_element(s).unwrap()
}

#[test]
fn ads_conditions_hold_for_shipped_parameters() {
    for spec in [
        FamilySpec::DilationMatrix {
            d: 1,
            a: vec![vec![2]],
        },
        FamilySpec::DilationMatrix {
            d: 2,
            a: vec![vec![1, 1], vec![-1, 1]],
        },
        FamilySpec::FiniteFieldShift {
            q: 2,
            f_degree: 1,
            f: None,
        },
        FamilySpec::FiniteFieldShift {
            q: 4,
            f_degree: 2,
            f: None,
        },
    ] {
        let f = build(&spec).unwrap();
        let conds = f.ads_conditions().unwrap();
        assert_eq!(conds.len(), 4);
        assert!(conds.iter().all(|c| c.holds));
    }
    assert!(bs(2, 3).ads_conditions().is_none());
}

/// Binary odometer on little-endian words.
fn odometer(w: &[u32]) -> Vec<u32> {
    let n: u64 = w.iter().enumerate().map(|(i, b)| u64::from(*b) << i).sum();
    let m = (n + 1) % (1 << w.len());
    (0..w.len()).map(|i| ((m >> i) & 1) as u32).collect()
}

#[test]
fn adding_machine_examples() {
    let f = build(&FamilySpec::adding_machine()).unwrap();
    let a = f.parse_element("(, a)").unwrap();
    assert_eq!(f.selfsimilar_image(&a, &[1, 1]).unwrap(), vec![0, 0]);
    assert_eq!(f.selfsimilar_image(&a, &[1, 1]).unwrap(), odometer(&[1, 1]));
    assert_eq!(f.selfsimilar_section(&a, &[1, 1]).unwrap(), a);
    let e = f.identity();
    assert_eq!(f.selfsimilar_image(&e, &[0, 1, 1]).unwrap(), vec![0, 1, 1]);
    assert_eq!(f.selfsimilar_image(&a, &[]).unwrap(), Vec::<u32>::new());
    assert_eq!(f.selfsimilar_section(&a, &[]).unwrap(), a);
    for len in 0..7 {
        for n in 0u32..(1 << len) {
            let w: Vec<u32> = (0..len).map(|i| (n >> i) & 1).collect();
            assert_eq!(f.selfsimilar_image(&a, &w).unwrap(), odometer(&w));
        }
    }
}

#[test]
fn cross_family_elements_are_rejected() {
    let f = bs(2, 3);
    let g = bs(3, 3);
    let x = f.parse_element("a").unwrap();
    assert!(g.multiply(&x, &x).is_err());
    assert!(nsp().scale(&x).is_err());
}
