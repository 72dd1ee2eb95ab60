use std::collections::BTreeSet;

use proptest::prelude::*;
use rlcm_analysis::{alpha, alpha_inverse, kappa_table, product_rule, Bounds};
use rlcm_core::RightLcmSemigroup;
use rlcm_families::{build, Family, FamilySpec};

fn specs() -> Vec<FamilySpec> {
    vec![
        FamilySpec::BaumslagSolitar { c: 2, d: 3 },
        FamilySpec::BaumslagSolitar { c: 3, d: 3 },
        FamilySpec::BaumslagSolitar { c: 3, d: 2 },
        FamilySpec::BaumslagSolitar { c: 4, d: 2 },
        FamilySpec::NSemidirectP { primes: vec![2, 3] },
        FamilySpec::EasyArtin { m: 2, n: 1 },
        FamilySpec::adding_machine(),
        FamilySpec::DilationMatrix {
            d: 1,
            a: vec![vec![-3]],
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
    ]
}

fn family(i: usize) -> Family {
    build(&specs()[i % specs().len()]).unwrap()
}

/// Levels small enough to enumerate quickly.
fn depth(f: &Family) -> u64 {
    Bounds::for_instance(f).depth.min(36)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn alpha_permutes_each_level(fi in 0usize..10, ai in 0usize..16) {
        let f = family(fi);
        let core = f.enumerate_core(3).unwrap();
        let a = &core[ai % core.len()];
        for level in f.levels(depth(&f)).unwrap() {
            let members: BTreeSet<_> = level.members.iter().cloned().collect();
            let mut image = BTreeSet::new();
            for t in &level.members {
                let x = alpha(&f, a, t).unwrap();
                prop_assert_eq!(f.scale(&x).unwrap(), f.scale(t).unwrap());
                prop_assert_eq!(&alpha_inverse(&f, a, &x).unwrap(), t);
                image.insert(x);
            }
            prop_assert_eq!(image, members);
        }
    }

    #[test]
    fn kappa_is_monotone_and_enclosed(fi in 0usize..10, ai in 0usize..16, bi in 0usize..16) {
        let f = family(fi);
        let core = f.enumerate_core(3).unwrap();
        let (a, b) = (&core[ai % core.len()], &core[bi % core.len()]);
        let t = kappa_table(&f, a, b, depth(&f)).unwrap();
        prop_assert!(t.is_monotone());
        for l in &t.levels {
            prop_assert!(l.exact <= l.class && l.class as u64 <= l.n);
        }
        prop_assert!(t.enclosure.0 <= t.enclosure.1);
    }

    #[test]
    fn product_rule_holds(fi in 0usize..10, ai in 0usize..16, bi in 0usize..16) {
        let f = family(fi);
        let core = f.enumerate_core(3).unwrap();
        let (a, b) = (&core[ai % core.len()], &core[bi % core.len()]);
        let r = product_rule(&f, a, b, depth(&f)).unwrap();
        prop_assert!(r.holds(), "{} mismatches {:?}", f.name(), r.mismatches);
    }
}
