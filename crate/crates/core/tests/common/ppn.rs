use std::collections::{HashSet, VecDeque};

use proptest::prelude::*;

use paraverse_core::constraint::{int, Valuation};
use paraverse_core::ppn::{
    coverable, fire, Answer, Marking, Net, Ppn,
    Weight,
};

pub const PARAMS: [&str; 2] = ["a", "b"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Side {
    Pre,
    Post,
    Both,
}

pub fn weight(parametric: bool) -> BoxedStrategy<Weight> {
    if parametric {
        prop_oneof![
            3 => (0u64..=2).prop_map(Weight::Num),
            2 => (0usize..2).prop_map(|i| Weight::Param(PARAMS[i].to_string())),
        ]
        .boxed()
    } else {
        (0u64..=2).prop_map(Weight::Num).boxed()
    }
}

/// Parameters only where `side` allows them; initial entries follow the post side.
pub fn arb_ppn(side: Side) -> impl Strategy<Value = Ppn> {
    let pre_p = side != Side::Post;
    let post_p = side != Side::Pre;
    (1usize..=4, 1usize..=4).prop_flat_map(move |(np, nt)| {
        let init = if post_p {
            prop_oneof![
                3 => (0u64..=3).prop_map(Weight::Num),
                1 => (0usize..2).prop_map(|i| Weight::Param(PARAMS[i].to_string())),
            ]
            .boxed()
        } else {
            (0u64..=3).prop_map(Weight::Num).boxed()
        };
        (
            proptest::collection::vec(proptest::collection::vec(weight(pre_p), np), nt),
            proptest::collection::vec(proptest::collection::vec(weight(post_p), np), nt),
            proptest::collection::vec(init, np),
        )
            .prop_map(move |(pre, post, initial)| {
                Ppn::new(
                    (0..np).map(|i| format!("p{i}")).collect(),
                    (0..nt).map(|i| format!("t{i}")).collect(),
                    PARAMS.iter().map(|s| s.to_string()).collect(),
                    pre,
                    post,
                    initial,
                )
                .unwrap()
            })
    })
}

pub fn arb_plain() -> impl Strategy<Value = Net> {
    arb_ppn(Side::Pre).prop_map(|n| n.instantiate(&valuation(&[1, 1])).unwrap())
}

pub fn valuation(v: &[u64]) -> Valuation {
    PARAMS.iter().zip(v).map(|(p, k)| (p.to_string(), int(*k as i64))).collect()
}

/// Fires a script on `net`, picking among enabled transitions; returns the run.
pub fn drive(net: &Net, choices: &[usize]) -> Vec<usize> {
    let mut m = net.initial_marking().unwrap();
    let mut run = Vec::new();
    for c in choices {
        let enabled: Vec<usize> = (0..net.transitions().len())
            .filter(|t| fire(net, &m, *t).is_some())
            .collect();
        if enabled.is_empty() {
            break;
        }
        let t = enabled[c % enabled.len()];
        m = fire(net, &m, t).unwrap();
        run.push(t);
    }
    run
}

/// Replays `run` on both nets; every step must stay enabled on `more` and
/// dominate the marking of `less`.
pub fn dominates_along(less: &Net, more: &Net, run: &[usize]) -> Result<(), String> {
    let mut a = less.initial_marking().unwrap();
    let mut b = more.initial_marking().unwrap();
    if a.iter().zip(&b).any(|(x, y)| y < x) {
        return Err("initial markings".into());
    }
    for (i, t) in run.iter().enumerate() {
        a = fire(less, &a, *t).unwrap();
        b = fire(more, &b, *t).ok_or(format!("step {i} disabled"))?;
        if a.iter().zip(&b).any(|(x, y)| y < x) {
            return Err(format!("step {i}: {b:?} does not dominate {a:?}"));
        }
    }
    Ok(())
}

/// All reachable markings, or `None` if some place exceeds `cap`.
pub fn exhaustive(net: &Net, cap: u64) -> Option<Vec<Marking>> {
    let m0 = net.initial_marking().unwrap();
    let mut seen = HashSet::from([m0.clone()]);
    let mut order = vec![m0.clone()];
    let mut queue = VecDeque::from([m0]);
    while let Some(m) = queue.pop_front() {
        for t in 0..net.transitions().len() {
            if let Some(n) = fire(net, &m, t) {
                if n.iter().any(|k| *k > cap) {
                    return None;
                }
                if seen.insert(n.clone()) {
                    order.push(n.clone());
                    queue.push_back(n);
                }
            }
        }
    }
    Some(order)
}

pub fn replays_to_cover(ppn: &Ppn, ans: &Answer, target: &[u64]) -> Result<(), String> {
    if let Answer::Yes(Some(w)) = ans {
        let net = ppn.instantiate(&w.valuation).map_err(|e| e.to_string())?;
        let run = w.run.as_ref().ok_or("yes without a run")?;
        let mut m = net.initial_marking().unwrap();
        for t in run {
            m = fire(&net, &m, *t).ok_or("witness step disabled")?;
        }
        if m.iter().zip(target).any(|(x, y)| x < y) {
            return Err(format!("witness ends in {m:?}, target {target:?}"));
        }
    }
    Ok(())
}

pub fn enumerated_covers(ppn: &Ppn, target: &[u64], bound: u64) -> Vec<bool> {
    let mut out = Vec::new();
    for a in 0..=bound {
        for b in 0..=bound {
            let net = ppn.instantiate(&valuation(&[a, b])).unwrap();
            out.push(coverable(&net, target));
        }
    }
    out
}

pub fn target(np: usize) -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(0u64..=3, np)
}
