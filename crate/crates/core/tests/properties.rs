use densitylab::constructions::Construction;
use densitylab::measures::flim_along;
use densitylab::tolerances::DEFAULT_THETAS;
use densitylab::{
    contains, count, exact_alpha_extremes, materialize, parse_set_expr, polya_bounds,
    weighted_count, CopyRule, FlimOptions, SetExpr,
};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = SetExpr> {
    prop_oneof![
        Just(SetExpr::Nat),
        Just(SetExpr::Empty),
        prop::collection::vec(1u64..200, 0..6).prop_map(|v| SetExpr::finite(v).unwrap()),
        (1u64..12).prop_flat_map(|m| (0..m, Just(m))).prop_map(|(r, m)| SetExpr::ap(r, m).unwrap()),
        block_set(),
    ]
}

fn block_set() -> impl Strategy<Value = SetExpr> {
    (2u64..5, 1u32..5)
        .prop_flat_map(|(b, p)| (Just(b), Just(p), prop::collection::vec(0..p, 0..=p as usize)))
        .prop_map(|(b, p, on)| SetExpr::blocks(b, p, on).unwrap())
}

fn rule() -> impl Strategy<Value = CopyRule> {
    prop_oneof![
        Just(CopyRule::First),
        (0u64..3).prop_map(CopyRule::Offset),
        any::<u64>().prop_map(CopyRule::Seeded),
    ]
}

fn expr() -> impl Strategy<Value = SetExpr> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SetExpr::union(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SetExpr::inter(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SetExpr::diff(a, b)),
            inner.clone().prop_map(SetExpr::compl),
            (inner, 3u64..6, rule()).prop_map(|(a, m, r)| {
                let r = match r {
                    CopyRule::Offset(t) => CopyRule::Offset(1 + t % m),
                    other => other,
                };
                SetExpr::m_copy(a, m, r).unwrap()
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn count_steps_match_membership(e in expr()) {
        let table = materialize(&e, 600);
        let mut prev = 0;
        for n in 1..=600 {
            let c = count(&e, n);
            prop_assert_eq!(c - prev, contains(&e, n) as u64);
            prop_assert_eq!(contains(&e, n), table.contains(n));
            prev = c;
        }
    }

    #[test]
    fn complement_and_inclusion_exclusion(e in expr(), f in expr(), n in 1u64..5000) {
        prop_assert_eq!(count(&SetExpr::compl(e.clone()), n) + count(&e, n), n);
        let u = count(&SetExpr::union(e.clone(), f.clone()), n);
        let i = count(&SetExpr::inter(e.clone(), f.clone()), n);
        prop_assert_eq!(u + i, count(&e, n) + count(&f, n));
    }

    #[test]
    fn canonical_text_round_trips(e in expr()) {
        let text = e.to_string();
        let back = parse_set_expr(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, e);
    }

    #[test]
    fn mcopy_counts_track_inner(e in expr(), m in 2u64..8, r in rule(), n in 1u64..3000) {
        let r = match r {
            CopyRule::Offset(t) => CopyRule::Offset(1 + t % m),
            other => other,
        };
        let c = SetExpr::m_copy(e.clone(), m, r).unwrap();
        prop_assert!(count(&c, m * n + m).abs_diff(count(&e, n)) <= 1);
    }

    #[test]
    fn weighted_count_is_monotone(e in expr(), alpha in -1.0f64..4.0, n in 2u64..4000) {
        let (a, b) = (weighted_count(&e, alpha, n - 1).unwrap(), weighted_count(&e, alpha, n).unwrap());
        prop_assert!(b >= a);
    }

    #[test]
    fn closed_forms_nest_in_alpha(e in block_set(), a in -0.9f64..10.0, d in 0.0f64..5.0) {
        let (lo_a, hi_a) = exact_alpha_extremes(&e, a).unwrap().unwrap();
        let (lo_b, hi_b) = exact_alpha_extremes(&e, a + d).unwrap().unwrap();
        prop_assert!(0.0 <= lo_a && lo_a <= hi_a + 1e-15 && hi_a <= 1.0);
        prop_assert!(lo_b <= lo_a + 1e-12 && hi_a <= hi_b + 1e-12);
    }

    #[test]
    fn constant_sequences_have_their_value_as_limit(c in 0.0f64..=1.0, k in 4usize..40) {
        let idx: Vec<u64> = (2..2 + k as u64).collect();
        prop_assert_eq!(flim_along(|_| Some(c), &idx, &FlimOptions::default()).unwrap(), c);
    }

    #[test]
    fn induction_keeps_inclusions(
        (ra, ma) in (1u64..9).prop_flat_map(|m| (0..m, Just(m))),
        (rb, mb) in (1u64..9).prop_flat_map(|m| (0..m, Just(m))),
    ) {
        let (a, b) = (SetExpr::ap(ra, ma).unwrap(), SetExpr::ap(rb, mb).unwrap());
        let h = 4000;
        let c = Construction::run(&a, &b, h, "intermediate_subset");
        let (mut dp, mut ap) = (0, 0);
        for n in 1..=h {
            let (in_a, in_b, in_d) = (contains(&a, n), contains(&b, n), c.set.contains(n));
            prop_assert!(!(in_a && in_b) || in_d);
            prop_assert!(!in_d || in_b);
            dp += c.d_prime.contains(n) as u64;
            ap += c.a_prime.contains(n) as u64;
            prop_assert!(dp <= ap);
        }
    }
}

/// For `A` with a density and `B` disjoint from it, Pólya's extremes shift
/// by `d(A)`.
#[test]
fn polya_extremes_shift_by_a_density() {
    let h = 1 << 20;
    let a = SetExpr::ap(0, 3).unwrap();
    let b = SetExpr::diff(SetExpr::blocks(2, 2, [0]).unwrap(), a.clone());
    let pb = polya_bounds(&b, &DEFAULT_THETAS, h).unwrap();
    let pu = polya_bounds(&SetExpr::union(a, b), &DEFAULT_THETAS, h).unwrap();
    assert!((pu.lld_est - (1.0 / 3.0 + pb.lld_est)).abs() <= 0.02, "{pu:?} {pb:?}");
    assert!((pu.uud_est - (1.0 / 3.0 + pb.uud_est)).abs() <= 0.02, "{pu:?} {pb:?}");
}
