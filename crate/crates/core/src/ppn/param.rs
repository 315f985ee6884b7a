use std::collections::BTreeSet;

use crate::constraint::{int, Valuation};

use super::km::{bounded_reach, find_cover, km_analyze, ReachVerdict};
use super::model::{Marking, Net, Ppn};
use super::PpnError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PpnLimits {
    pub max_states: usize,
    pub token_cap: u64,
    /// Largest value tried per parameter when enumerating valuations.
    pub valuation_bound: u64,
}

impl Default for PpnLimits {
    fn default() -> Self {
        PpnLimits {
            max_states: 100_000,
            token_cap: 200,
            valuation_bound: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    Exists,
    Forall,
    At(Valuation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Property {
    Cover(Marking),
    Reach(Marking),
    Bounded,
    /// The places are unbounded simultaneously.
    Simultaneous(BTreeSet<usize>),
}

impl Property {
    /// Preserved when behaviours are added.
    fn upward(&self) -> bool {
        matches!(self, Property::Cover(_) | Property::Simultaneous(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub valuation: Valuation,
    /// A firing sequence, for coverability and reachability.
    pub run: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Yes(Option<Witness>),
    No(Option<Witness>),
    Unknown,
}

fn constant(ppn: &Ppn, k: u64) -> Valuation {
    ppn.params().iter().map(|p| (p.clone(), int(k as i64))).collect()
}

/// Decides `prop` on a parameter-free net; `None` when limits were hit.
fn on_instance(net: &Net, prop: &Property, limits: &PpnLimits) -> Option<(bool, Option<Vec<usize>>)> {
    match prop {
        Property::Cover(m) => {
            if km_analyze(net).covers(m) {
                Some((true, find_cover(net, m, limits.max_states)))
            } else {
                Some((false, None))
            }
        }
        Property::Reach(m) => match bounded_reach(net, m, limits.max_states, limits.token_cap) {
            ReachVerdict::Yes(run) => Some((true, Some(run))),
            ReachVerdict::NoWithinBound => Some((false, None)),
            ReachVerdict::Unknown => None,
        },
        Property::Bounded => Some((km_analyze(net).bounded, None)),
        Property::Simultaneous(x) => Some((km_analyze(net).simultaneously_unbounded(x), None)),
    }
}

fn at(ppn: &Ppn, v: Valuation, prop: &Property, limits: &PpnLimits) -> Result<Answer, PpnError> {
    let net = ppn.instantiate(&v)?;
    Ok(match on_instance(&net, prop, limits) {
        Some((true, run)) => Answer::Yes(Some(Witness { valuation: v, run })),
        Some((false, _)) => Answer::No(Some(Witness {
            valuation: v,
            run: None,
        })),
        None => Answer::Unknown,
    })
}

/// Every valuation with values in `0..=bound`, in lexicographic order.
fn valuations(ppn: &Ppn, bound: u64) -> impl Iterator<Item = Valuation> + '_ {
    let k = ppn.params().len();
    let mut digits = vec![0u64; k];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let v: Valuation = ppn
            .params()
            .iter()
            .zip(&digits)
            .map(|(p, d)| (p.clone(), int(*d as i64)))
            .collect();
        done = true;
        for d in digits.iter_mut().rev() {
            if *d < bound {
                *d += 1;
                done = false;
                break;
            }
            *d = 0;
        }
        Some(v)
    })
}

fn check_target(ppn: &Ppn, prop: &Property) -> Result<(), PpnError> {
    match prop {
        Property::Cover(m) | Property::Reach(m) if m.len() != ppn.places().len() => {
            Err(PpnError::Invalid(vec!["target marking must cover every place".into()]))
        }
        Property::Simultaneous(x) if x.iter().any(|p| *p >= ppn.places().len()) => {
            Err(PpnError::UnknownPlace(format!("{x:?}")))
        }
        _ => Ok(()),
    }
}

/// Answers `prop` for some valuation, every valuation, or a given one.
///
/// Lowering a parameter that only occurs on pre arcs never removes a
/// behaviour, so for such nets the all-zero valuation is the most
/// permissive one. Dually, when pre weights are numeric, raising post or
/// initial parameters only adds behaviours and the all-zero valuation is
/// the least permissive one; existential coverability is then decided on
/// the net whose parametric post and initial entries are ω. Everything else
/// enumerates valuations up to `limits.valuation_bound`, which can only
/// confirm existential questions and refute universal ones.
pub fn decide(ppn: &Ppn, mode: &Mode, prop: &Property, limits: &PpnLimits) -> Result<Answer, PpnError> {
    check_target(ppn, prop)?;
    let sub = ppn.classify();
    if let Mode::At(v) = mode {
        return at(ppn, v.clone(), prop, limits);
    }
    let zero = constant(ppn, 0);
    if sub.is_plain {
        return at(ppn, zero, prop, limits);
    }
    let pre_numeric = ppn.pre.iter().flatten().all(|w| w.param().is_none());
    let exists = *mode == Mode::Exists;
    let zero_is_extreme = if exists {
        (prop.upward() && sub.is_pre_t) || (*prop == Property::Bounded && pre_numeric)
    } else {
        (prop.upward() && pre_numeric) || (*prop == Property::Bounded && sub.is_pre_t)
    };
    if zero_is_extreme {
        return at(ppn, zero, prop, limits);
    }
    if let (true, Property::Cover(m), true) = (exists, prop, pre_numeric) {
        if !km_analyze(&ppn.omega_net()?).covers(m) {
            return Ok(Answer::No(None));
        }
        // a finite valuation exists; look for one with a concrete run
        let mut k = 0u64;
        while k <= 1 << 16 {
            let v = constant(ppn, k);
            let net = ppn.instantiate(&v)?;
            if km_analyze(&net).covers(m) {
                let run = find_cover(&net, m, limits.max_states);
                return Ok(Answer::Yes(Some(Witness { valuation: v, run })));
            }
            k = if k == 0 { 1 } else { k * 2 };
        }
        return Ok(Answer::Yes(None));
    }
    for v in valuations(ppn, limits.valuation_bound) {
        let net = ppn.instantiate(&v)?;
        match on_instance(&net, prop, limits) {
            Some((true, run)) if exists => {
                return Ok(Answer::Yes(Some(Witness { valuation: v, run })));
            }
            Some((false, _)) if !exists => {
                return Ok(Answer::No(Some(Witness {
                    valuation: v,
                    run: None,
                })));
            }
            _ => {}
        }
    }
    Ok(Answer::Unknown)
}

pub fn existential_coverable(ppn: &Ppn, m: &[u64], limits: &PpnLimits) -> Result<Answer, PpnError> {
    decide(ppn, &Mode::Exists, &Property::Cover(m.to_vec()), limits)
}

pub fn universal_coverable(ppn: &Ppn, m: &[u64], limits: &PpnLimits) -> Result<Answer, PpnError> {
    decide(ppn, &Mode::Forall, &Property::Cover(m.to_vec()), limits)
}
