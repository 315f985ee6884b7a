use proptest::prelude::*;
use paraverse_core::mts::{
    eval_fixed, minimal_valuations, par_pre, par_pre_explicit, Alpha, ParamValuation,
};

mod common;
use common::checks;
use common::mts::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parametric_and_fixed_agree((m, phi) in model_and_formula(6)) {
        checks::parametric_and_fixed_agree(&m, &phi)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn fixed_semantics_matches_paths((m, phi) in model_and_formula(4)) {
        for v in m.universe().iter() {
            for s in 0..m.states().len() {
                prop_assert_eq!(eval_fixed(&m, &v, &phi, s).unwrap(), by_paths(&m, &v, &phi, s), "{} at s{}", phi, s);
            }
        }
    }

    #[test]
    fn preimage_strategies_agree_and_are_monotone(m in arb_mts(6), seed in any::<u64>()) {
        let u = m.universe();
        let n = m.states().len();
        let size = u.size();
        let pick = |salt: u64| -> Vec<_> {
            (0..n)
                .map(|s| u.from_fn(|v| {
                    let h = (u.index(v) as u64 + 31 * s as u64 + salt).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                    (h >> 61) < 3
                }))
                .collect()
        };
        let f = pick(seed);
        let g: Vec<_> = f.iter().zip(pick(seed ^ 0xABCD)).map(|(a, b)| a.union(&b)).collect();
        for y in m.vars() {
            let alpha = Alpha::Var(y.clone());
            let pf = par_pre(&m, &f, &alpha).unwrap();
            prop_assert_eq!(&pf, &par_pre_explicit(&m, &f, &alpha).unwrap());
            let pg = par_pre(&m, &g, &alpha).unwrap();
            for s in 0..n {
                prop_assert!(pf[s].is_subset(&pg[s]));
            }
        }
        prop_assert!(size > 0);
    }

    #[test]
    fn minimal_valuations_generate_upward_closed_sets(m in arb_mts(3), picks in proptest::collection::vec(any::<u16>(), 1..4)) {
        let u = m.universe();
        let gens: Vec<ParamValuation> = picks.iter().map(|p| u.valuation(*p as usize % u.size())).collect();
        let up = u.from_fn(|v| gens.iter().any(|g| g.le(v)));
        let mins = minimal_valuations(&u, &up);
        for w in &mins {
            prop_assert!(!mins.iter().any(|x| x != w && x.le(w)));
        }
        let closure = u.from_fn(|v| mins.iter().any(|g| g.le(v)));
        prop_assert_eq!(closure, up);
    }
}
