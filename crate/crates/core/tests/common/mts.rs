use std::collections::BTreeSet;

use proptest::prelude::*;

use paraverse_core::mts::{
    enumerate_paths, Alpha,
    Formula, Mts, ParamValuation,
};

pub const ACTIONS: [&str; 3] = ["a", "b", "c"];
pub const VARS: [&str; 2] = ["Y", "Z"];
pub const PROPS: [&str; 2] = ["p", "q"];

pub fn arb_mts(max_states: usize) -> impl Strategy<Value = Mts> {
    (1usize..=max_states, 1usize..=3, 1usize..=2).prop_flat_map(|(n, k, x)| {
        let trans = proptest::collection::vec((0..n, 0..k, 0..n), 0..=(2 * n));
        let labels = proptest::collection::vec((any::<bool>(), any::<bool>()), n);
        (trans, labels).prop_map(move |(t, ls)| {
            let labels = ls
                .into_iter()
                .map(|(p, q)| {
                    let mut s = BTreeSet::new();
                    if p {
                        s.insert("p".to_string());
                    }
                    if q {
                        s.insert("q".to_string());
                    }
                    s
                })
                .collect();
            Mts::new(
                (0..n).map(|i| format!("s{i}")).collect(),
                0,
                ACTIONS[..k].iter().map(|s| s.to_string()).collect(),
                VARS[..x].iter().map(|s| s.to_string()).collect(),
                t,
                labels,
            )
            .unwrap()
        })
    })
}

/// Formulas over the first action and first variable only, so they fit every model.
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        (0..2usize).prop_map(|i| Formula::prop(PROPS[i])),
    ];
    let alpha = prop_oneof![
        Just(Alpha::Var("Y".into())),
        Just(Alpha::Set(BTreeSet::from(["a".to_string()]))),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (alpha.clone(), inner.clone()).prop_map(|(a, f)| Formula::next(a, f)),
            (alpha.clone(), inner.clone()).prop_map(|(a, f)| Formula::globally(a, f)),
            (alpha.clone(), inner.clone()).prop_map(|(a, f)| Formula::globally_omega(a, f)),
            (alpha.clone(), inner.clone(), inner.clone()).prop_map(|(a, f, g)| Formula::until(a, f, g)),
        ]
    })
}

/// Rewrites variables so they refer to declared ones: `Z` is used only when declared.
pub fn arb_formula_for(m: &Mts) -> impl Strategy<Value = Formula> {
    let two = m.vars().len() == 2;
    (arb_formula(), any::<bool>()).prop_map(move |(f, swap)| if two && swap { rename(&f) } else { f })
}

pub fn rename(f: &Formula) -> Formula {
    let a = |x: &Alpha| match x {
        Alpha::Var(_) => Alpha::Var("Z".into()),
        s => s.clone(),
    };
    match f {
        Formula::True | Formula::Prop(_) => f.clone(),
        Formula::Not(g) => Formula::not(rename(g)),
        Formula::Or(g, h) => Formula::or(rename(g), h.as_ref().clone()),
        Formula::Next(x, g) => Formula::next(a(x), rename(g)),
        Formula::Globally(x, g) => Formula::globally(a(x), rename(g)),
        Formula::GloballyOmega(x, g) => Formula::globally_omega(a(x), g.as_ref().clone()),
        Formula::Until(x, g, h) => Formula::until(a(x), g.as_ref().clone(), rename(h)),
    }
}

pub fn alpha_mask(m: &Mts, v: &ParamValuation, a: &Alpha) -> u32 {
    match a {
        Alpha::Var(y) => v.0[m.vars().iter().position(|x| x == y).unwrap()],
        Alpha::Set(s) => s.iter().map(|n| 1 << m.action_index(n).unwrap()).sum(),
    }
}

/// Path-based semantics over the enumerated lasso/maximal paths.
pub fn by_paths(m: &Mts, v: &ParamValuation, phi: &Formula, s: usize) -> bool {
    let bound = m.states().len() + 1;
    match phi {
        Formula::True => true,
        Formula::Prop(p) => m.label(s).contains(p),
        Formula::Not(f) => !by_paths(m, v, f, s),
        Formula::Or(f, g) => by_paths(m, v, f, s) || by_paths(m, v, g, s),
        Formula::Next(a, f) => {
            let b = alpha_mask(m, v, a);
            m.out(s).iter().any(|(x, t)| b >> x & 1 == 1 && by_paths(m, v, f, *t))
        }
        Formula::Globally(a, f) => enumerate_paths(m, alpha_mask(m, v, a), s, bound)
            .iter()
            .any(|p| !p.truncated && p.states.iter().all(|t| by_paths(m, v, f, *t))),
        Formula::GloballyOmega(a, f) => enumerate_paths(m, alpha_mask(m, v, a), s, bound)
            .iter()
            .any(|p| p.lasso.is_some() && p.states.iter().all(|t| by_paths(m, v, f, *t))),
        Formula::Until(a, f, g) => enumerate_paths(m, alpha_mask(m, v, a), s, bound).iter().any(|p| {
            for t in &p.states {
                if by_paths(m, v, g, *t) {
                    return true;
                }
                if !by_paths(m, v, f, *t) {
                    return false;
                }
            }
            false
        }),
    }
}

pub fn model_and_formula(max_states: usize) -> impl Strategy<Value = (Mts, Formula)> {
    arb_mts(max_states).prop_flat_map(|m| {
        let f = arb_formula_for(&m);
        (Just(m), f)
    })
}
