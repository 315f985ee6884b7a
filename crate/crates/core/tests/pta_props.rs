use std::collections::BTreeSet;
use proptest::prelude::*;
use paraverse_core::constraint::{int, ratio, Rational};
use paraverse_core::io::parse_pta;
use paraverse_core::pta::{
    classify_lu, concrete_reach, explore, initial_symbolic, replay, succ, Limits, LuClass,
};

mod common;
use common::pta::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lu_runs_survive_looser_parameters(
        text in arb_lu_pta(),
        v in (0i64..=4, 0i64..=4),
        d in (0i64..=3, 0i64..=3),
        raw in proptest::collection::vec((0i64..=8, 0usize..5), 0..8),
    ) {
        let a = parse_pta(&text, None).unwrap();
        prop_assert!(!matches!(classify_lu(&a), LuClass::NotLu), "{}", text);
        let tight = a.instantiate(&val(int(v.0), int(v.1))).unwrap();
        let loose = a.instantiate(&val(int((v.0 - d.0).max(0)), int(v.1 + d.1))).unwrap();
        let script: Vec<(Rational, usize)> = raw
            .iter()
            .map(|(k, e)| (ratio(*k, 2), e % a.edges().len()))
            .collect();
        let k = valid_prefix(&tight, &script);
        prop_assert!(replay(&loose, &script[..k]).is_ok(), "{} prefix {}", text, k);
    }

    #[test]
    fn zone_graph_matches_concrete_reachability(text in arb_lu_pta()) {
        let a = parse_pta(&text, None).unwrap();
        let limits = Limits { max_states: 40, max_depth: 12 };
        let g = explore(&a, limits, true, None).unwrap();
        if !g.complete {
            return Ok(());
        }
        for p1 in [0i64, 1, 3] {
            for p2 in [0i64, 2, 5] {
                let v = val(int(p1), int(p2));
                let ta = a.instantiate(&v).unwrap();
                for l in 0..a.locations().len() {
                    let symbolic = g.states.iter().any(|s| {
                        s.location == l && s.zone.project_params().satisfies(&v).unwrap()
                    });
                    let concrete = concrete_reach(&ta, &BTreeSet::from([l])).unwrap();
                    prop_assert_eq!(symbolic, concrete, "{} at l{} v={:?}", text, l, v);
                }
            }
        }
    }

    #[test]
    fn successors_are_monotone_in_zones(text in arb_lu_pta(), extra in (0usize..6, 0usize..2, 0i64..=3)) {
        let a = parse_pta(&text, None).unwrap();
        let s0 = initial_symbolic(&a).unwrap();
        let smaller_zone = s0
            .zone
            .conjoin(&paraverse_core::io::parse_constraint(&atom(extra.0, extra.1, extra.2), &a.context()).unwrap())
            .unwrap();
        let smaller = paraverse_core::pta::SymbolicState { location: s0.location, zone: smaller_zone };
        for (e, _) in a.edges_from(s0.location) {
            if let Some(small) = succ(&a, &smaller, e) {
                let big = succ(&a, &s0, e);
                prop_assert!(big.is_some());
                prop_assert!(small.zone.is_subset_of(&big.unwrap().zone));
            }
        }
    }
}
