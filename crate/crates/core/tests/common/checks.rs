//! Property bodies run both by the proptest suites and by the acceptance run.

use proptest::prelude::*;
use proptest::test_runner::TestCaseResult;

use paraverse_core::constraint::{ratio, ConstraintSet, Rational, Valuation, Var};
use paraverse_core::mts::{eval_fixed, synthesize, Formula, Mts};
use paraverse_core::pimc::{is_consistent, synthesize_consistency, Pimc};
use paraverse_core::ppn::{coverable, decide, km_analyze, Count, Mode, PpnLimits, Ppn, Property, Net};

use super::constraint::{build, extends, params, point, RawAtom};
use super::ppn::{dominates_along, drive, enumerated_covers, exhaustive, replays_to_cover, valuation};

pub fn elimination_is_exact(raw: &[RawAtom], which: usize, pts: &[Vec<i64>]) -> TestCaseResult {
    let vars = params(4);
    let c = build(&vars, raw);
    let v = vars[which].clone();
    let e = c.eliminate(std::slice::from_ref(&v));
    prop_assert!(e.atoms().iter().all(|a| !a.term.mentions(&v)));
    for xs in pts {
        let mut val = point(&vars, xs);
        val.remove(v.name());
        let got = e.satisfies(&val).unwrap();
        prop_assert_eq!(got, extends(&c, &v, &val), "{} at {:?}", e, val);
    }
    prop_assert_eq!(e.is_satisfiable(), c.is_satisfiable());
    Ok(())
}

pub fn elapse_is_idempotent(raw: &[RawAtom]) -> TestCaseResult {
    let vars = vec![Var::clock("x1"), Var::clock("x2"), Var::param("p")];
    let clocks = &vars[..2];
    let c = build(&vars, raw);
    let once = ConstraintSet::from_convex(c.time_elapse(clocks));
    let twice = ConstraintSet::from_convex(c.time_elapse(clocks).time_elapse(clocks));
    prop_assert!(once.contains(&twice).unwrap());
    prop_assert!(twice.contains(&once).unwrap());
    // and it only adds points
    prop_assert!(once.contains(&ConstraintSet::from_convex(c)).unwrap());
    Ok(())
}

pub fn containment_is_a_partial_order(
    a: &ConstraintSet,
    extra: &[Vec<RawAtom>],
    other: &ConstraintSet,
    pts: &[Vec<i64>],
) -> TestCaseResult {
    let vars = params(2);
    let b = a.intersect_convex(&build(&vars, &extra[0])).unwrap();
    let c = b.intersect_convex(&build(&vars, &extra[1])).unwrap();
    prop_assert!(a.contains(a).unwrap());
    prop_assert!(a.contains(&b).unwrap() && b.contains(&c).unwrap());
    prop_assert!(a.contains(&c).unwrap());
    let fwd = a.contains(other).unwrap();
    let bwd = other.contains(a).unwrap();
    for xs in pts {
        let val = point(&vars, xs);
        let in_a = a.contains_point(&val).unwrap();
        let in_o = other.contains_point(&val).unwrap();
        if fwd && in_o {
            prop_assert!(in_a);
        }
        if bwd && in_a {
            prop_assert!(in_o);
        }
        if fwd && bwd {
            prop_assert_eq!(in_a, in_o);
        }
    }
    // transitivity across unrelated sets
    if bwd {
        prop_assert!(other.contains(&c).unwrap());
    }
    Ok(())
}

pub fn parametric_and_fixed_agree(m: &Mts, phi: &Formula) -> TestCaseResult {
    let u = m.universe();
    let f = synthesize(m, phi).unwrap();
    for s in 0..m.states().len() {
        for v in u.iter() {
            prop_assert_eq!(
                f[s].contains(&u, &v),
                eval_fixed(m, &v, phi, s).unwrap(),
                "{} at s{} under {}",
                phi,
                s,
                u.display(&v)
            );
        }
    }
    Ok(())
}

pub fn synthesis_matches_instances_on_grid(pimc: &Pimc) -> TestCaseResult {
    let set = synthesize_consistency(pimc);
    let grid: Vec<Rational> = (0..=20).map(|k| ratio(k, 20)).collect();
    let points: Vec<Valuation> = if pimc.params().len() == 1 {
        grid.iter().map(|a| Valuation::new().with("a", a.clone())).collect()
    } else {
        grid.iter()
            .flat_map(|a| {
                grid.iter()
                    .map(move |b| Valuation::new().with("a", a.clone()).with("b", b.clone()))
            })
            .collect()
    };
    for v in points {
        let inst = is_consistent(&pimc.instantiate(&v).unwrap()).0;
        prop_assert_eq!(set.contains_point(&v).unwrap(), inst, "at {}", v);
    }
    Ok(())
}

pub fn pre_t_lower_valuations_replay(n: &Ppn, v: &[u64], d: &[u64], choices: &[usize]) -> TestCaseResult {
    prop_assert!(n.classify().is_pre_t);
    let lower: Vec<u64> = v.iter().zip(d).map(|(x, y)| x.saturating_sub(*y)).collect();
    let hi = n.instantiate(&valuation(v)).unwrap();
    let lo = n.instantiate(&valuation(&lower)).unwrap();
    let run = drive(&hi, choices);
    prop_assert_eq!(dominates_along(&hi, &lo, &run), Ok(()));
    Ok(())
}

pub fn post_t_higher_valuations_replay(n: &Ppn, v: &[u64], d: &[u64], choices: &[usize]) -> TestCaseResult {
    // post and initial entries may both be parametric
    prop_assert!((0..n.transitions().len()).all(|t| n.pre(t).iter().all(|w| w.param().is_none())));
    let higher: Vec<u64> = v.iter().zip(d).map(|(x, y)| x + y).collect();
    let lo = n.instantiate(&valuation(v)).unwrap();
    let hi = n.instantiate(&valuation(&higher)).unwrap();
    let run = drive(&lo, choices);
    prop_assert_eq!(dominates_along(&lo, &hi, &run), Ok(()));
    Ok(())
}

pub fn karp_miller_matches_exhaustive(net: &Net, t: &[u64]) -> TestCaseResult {
    let km = km_analyze(net);
    if let Some(all) = exhaustive(net, 50) {
        prop_assert!(km.bounded);
        let np = net.places().len();
        let maxima: Vec<Count> = (0..np)
            .map(|p| Count::Fin(all.iter().map(|m| m[p]).max().unwrap()))
            .collect();
        prop_assert_eq!(km.place_bounds(), maxima);
        let t = &t[..np];
        let dominated = all.iter().any(|m| m.iter().zip(t).all(|(x, y)| x >= y));
        prop_assert_eq!(coverable(net, t), dominated);
    } else {
        prop_assert!(!km.bounded);
    }
    Ok(())
}

/// Existential cover answers replay their witnesses; a non-Yes answer
/// means no small valuation covers.
pub fn existential_witnesses_replay(n: &Ppn, t: &[u64]) -> TestCaseResult {
    let t = &t[..n.places().len()];
    let ans = decide(n, &Mode::Exists, &Property::Cover(t.to_vec()), &PpnLimits::default()).unwrap();
    replays_to_cover(n, &ans, t).map_err(TestCaseError::fail)?;
    if !matches!(ans, paraverse_core::ppn::Answer::Yes(_)) {
        prop_assert!(enumerated_covers(n, t, 5).into_iter().all(|b| !b));
    }
    Ok(())
}
