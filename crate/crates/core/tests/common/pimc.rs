use std::collections::BTreeSet;

use num_traits::{One, Zero};
use proptest::prelude::*;

use paraverse_core::constraint::{ratio, AtomicConstraint, ConvexConstraint, LinearTerm, Rational, Rel, Var};
use paraverse_core::pimc::{
    Endpoint, Imc, Interval, Mc,
    ParamInterval, Pimc,
};

/// Some state support `T ∋ s0` in which every state has a distribution
/// within its intervals that stays inside `T`.
pub fn brute_force_consistent(imc: &Imc) -> bool {
    let n = imc.states().len();
    let s0 = imc.initial();
    (0u32..1 << n).filter(|m| m >> s0 & 1 == 1).any(|mask| {
        let support: Vec<usize> = (0..n).filter(|s| mask >> s & 1 == 1).collect();
        support.iter().all(|&s| {
            let mut vars = Vec::new();
            let mut atoms = Vec::new();
            let mut total = LinearTerm::constant(-Rational::one());
            for t in 0..n {
                let iv = imc.phi(s, t);
                if mask >> t & 1 == 1 {
                    let y = Var::aux(format!("y{t}"));
                    atoms.push(AtomicConstraint::var_cmp(y.clone(), Rel::Ge, iv.low.clone()));
                    atoms.push(AtomicConstraint::var_cmp(y.clone(), Rel::Le, iv.up.clone()));
                    total.add_coeff(y.clone(), 1.into());
                    vars.push(y);
                } else if !iv.low.is_zero() {
                    return false;
                }
            }
            atoms.push(AtomicConstraint::new(total, Rel::Eq));
            ConvexConstraint::new(vars, atoms).unwrap().is_satisfiable()
        })
    })
}

pub fn frac() -> impl Strategy<Value = Rational> {
    (0i64..=10).prop_map(|k| ratio(k, 10))
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

pub fn arb_imc() -> impl Strategy<Value = Imc> {
    (1usize..=5).prop_flat_map(|n| {
        let cell = prop_oneof![
            2 => Just(None),
            3 => (frac(), frac()).prop_map(|(a, b)| {
                // mostly well-formed
                if a <= b { Some(Interval::new(a, b)) } else { Some(Interval::new(b, a)) }
            }),
            1 => (frac(), frac()).prop_map(|(a, b)| Some(Interval::new(a, b))),
        ];
        proptest::collection::vec(proptest::collection::vec(cell, n), n).prop_map(move |m| {
            let rows = m
                .into_iter()
                .map(|r| r.into_iter().enumerate().filter_map(|(t, c)| c.map(|i| (t, i))).collect())
                .collect();
            Imc::new(names(n), 0, vec![BTreeSet::new(); n], rows).unwrap()
        })
    })
}

pub fn arb_mc() -> impl Strategy<Value = Mc> {
    (1usize..=4).prop_flat_map(|n| {
        let row = proptest::collection::vec(0i64..=3, n).prop_map(move |w| {
            let w = if w.iter().all(|x| *x == 0) { vec![1; n] } else { w };
            let total: i64 = w.iter().sum();
            w.iter().enumerate().filter(|(_, x)| **x > 0).map(|(t, x)| (t, ratio(*x, total))).collect::<Vec<_>>()
        });
        let labels = proptest::collection::vec(0u8..2, n);
        (proptest::collection::vec(row, n), labels).prop_map(move |(rows, ls)| {
            let labels = ls
                .into_iter()
                .map(|l| if l == 1 { BTreeSet::from(["a".to_string()]) } else { BTreeSet::new() })
                .collect();
            Mc::new(names(n), 0, labels, rows).unwrap()
        })
    })
}

pub fn endpoint(params: usize) -> impl Strategy<Value = Endpoint> {
    prop_oneof![
        3 => frac().prop_map(Endpoint::Num),
        2 => (0..params).prop_map(|i| Endpoint::Param(["a", "b"][i].to_string())),
    ]
}

pub fn arb_pimc() -> impl Strategy<Value = Pimc> {
    (2usize..=4, 1usize..=2).prop_flat_map(|(n, k)| {
        let cell = prop_oneof![
            1 => Just(None),
            2 => (endpoint(k), endpoint(k)).prop_map(|(low, up)| Some(ParamInterval { low, up })),
        ];
        proptest::collection::vec(proptest::collection::vec(cell, n), n).prop_map(move |m| {
            let rows = m
                .into_iter()
                .map(|r| r.into_iter().enumerate().filter_map(|(t, c)| c.map(|i| (t, i))).collect())
                .collect();
            let params = ["a", "b"][..k].iter().map(|s| s.to_string()).collect();
            Pimc::new(names(n), 0, vec![BTreeSet::new(); n], params, rows).unwrap()
        })
    })
}
