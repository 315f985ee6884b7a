use proptest::prelude::*;
use paraverse_core::pimc::{
    is_consistent, n_consistent, satisfies, Imc,
};

mod common;
use common::checks::*;
use common::pimc::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn consistency_matches_brute_force(imc in arb_imc()) {
        prop_assert_eq!(is_consistent(&imc).0, brute_force_consistent(&imc));
    }

    #[test]
    fn witnesses_satisfy(imc in arb_imc()) {
        if let (true, Some(mc)) = is_consistent(&imc) {
            prop_assert!(satisfies(&mc, &imc).0);
        }
    }

    #[test]
    fn n_consistency_is_antitone(imc in arb_imc(), n in 0usize..6) {
        for s in 0..imc.states().len() {
            if n_consistent(&imc, s, n + 1).unwrap() {
                prop_assert!(n_consistent(&imc, s, n).unwrap());
            }
        }
    }

    #[test]
    fn chains_satisfy_their_point_interval_chain(mc in arb_mc()) {
        prop_assert!(satisfies(&mc, &Imc::point(&mc)).0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn grid_agreement(pimc in arb_pimc()) {
        synthesis_matches_instances_on_grid(&pimc)?;
    }
}
