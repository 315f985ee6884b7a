use std::collections::{BTreeSet, VecDeque};

use crate::constraint::{ConstraintSet, ConvexConstraint, IntegerPoint};

use super::model::domain_atoms;
use super::{Pta, PtaError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicState {
    pub location: usize,
    pub zone: ConvexConstraint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_states: usize,
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 100_000,
            max_depth: 1000,
        }
    }
}

/// Explored part of the parametric zone graph.
#[derive(Debug, Clone)]
pub struct Pzg {
    pub states: Vec<SymbolicState>,
    pub depths: Vec<usize>,
    /// (source state, edge index, target state)
    pub transitions: Vec<(usize, usize, usize)>,
    pub complete: bool,
    pub depth_bounded: bool,
    pub state_bounded: bool,
}

/// `(⋀ x = 0)↗ ∧ I(l0)`, intersected with the parameter domain.
pub fn initial_symbolic(pta: &Pta) -> Result<SymbolicState, PtaError> {
    let ctx = pta.context();
    let origin = ConvexConstraint::truth(ctx)
        .with_atoms(pta.clocks().iter().map(|x| {
            crate::constraint::AtomicConstraint::var_cmp(
                x.clone(),
                crate::constraint::Rel::Eq,
                crate::constraint::Rational::from_integer(0.into()),
            )
        }))
        .expect("clocks are in the context");
    let zone = origin
        .time_elapse(pta.clocks())
        .with_atoms(domain_atoms(pta))
        .expect("parameters are in the context")
        .conjoin(pta.invariant(pta.initial()))
        .expect("invariants share the model context")
        .simplify();
    if !zone.is_satisfiable() {
        return Err(PtaError::EmptyInitialState);
    }
    Ok(SymbolicState {
        location: pta.initial(),
        zone,
    })
}

/// `((C ∧ g)_R ∧ I(l'))↗ ∧ I(l')`, or `None` when empty.
pub fn succ(pta: &Pta, s: &SymbolicState, edge: usize) -> Option<SymbolicState> {
    let e = &pta.edges()[edge];
    if e.source != s.location {
        return None;
    }
    let inv = pta.invariant(e.target);
    let guarded = s.zone.conjoin(&e.guard).ok()?;
    if !guarded.is_satisfiable() {
        return None;
    }
    let reset = guarded.reset(&e.resets).conjoin(inv).ok()?;
    if !reset.is_satisfiable() {
        return None;
    }
    let zone = reset
        .time_elapse(pta.clocks())
        .conjoin(inv)
        .ok()?
        .simplify();
    if !zone.is_satisfiable() {
        return None;
    }
    Some(SymbolicState {
        location: e.target,
        zone,
    })
}

/// Breadth-first exploration, edges in declaration order.
///
/// With `subsume`, a new state is dropped when a stored state at the same
/// location contains it; otherwise only exact duplicates are merged. States
/// at locations in `stop_at` are recorded but not expanded.
pub fn explore(
    pta: &Pta,
    limits: Limits,
    subsume: bool,
    stop_at: Option<&BTreeSet<usize>>,
) -> Result<Pzg, PtaError> {
    let init = initial_symbolic(pta)?;
    let mut g = Pzg {
        states: vec![init],
        depths: vec![0],
        transitions: Vec::new(),
        complete: true,
        depth_bounded: false,
        state_bounded: false,
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let loc = g.states[i].location;
        if stop_at.map_or(false, |t| t.contains(&loc)) {
            continue;
        }
        let depth = g.depths[i];
        for (ei, _) in pta.edges_from(loc) {
            let Some(next) = succ(pta, &g.states[i], ei) else {
                continue;
            };
            if depth + 1 > limits.max_depth {
                g.depth_bounded = true;
                g.complete = false;
                continue;
            }
            let mut found = None;
            for (j, s) in g.states.iter().enumerate() {
                if s.location != next.location {
                    continue;
                }
                if subsume {
                    if next.zone.is_subset_of(&s.zone) {
                        found = Some(j);
                        break;
                    }
                } else if next.zone.equivalent(&s.zone) {
                    found = Some(j);
                    break;
                }
            }
            match found {
                Some(j) => g.transitions.push((i, ei, j)),
                None => {
                    if g.states.len() >= limits.max_states {
                        g.state_bounded = true;
                        g.complete = false;
                        continue;
                    }
                    g.states.push(next);
                    g.depths.push(depth + 1);
                    let j = g.states.len() - 1;
                    g.transitions.push((i, ei, j));
                    queue.push_back(j);
                }
            }
        }
    }
    Ok(g)
}

/// Parameter valuations for which some run reaches `targets`.
///
/// Target states are not expanded: their successors only add constraints
/// on the parameters, so their projections are already covered.
pub fn ef_synthesis(
    pta: &Pta,
    targets: &BTreeSet<usize>,
    limits: Limits,
) -> Result<(ConstraintSet, bool), PtaError> {
    let g = explore(pta, limits, true, Some(targets))?;
    let mut result = ConstraintSet::empty(pta.params().to_vec());
    for s in &g.states {
        if targets.contains(&s.location) {
            result
                .union_absorbing(s.zone.project_params())
                .expect("projection has the parameter context");
        }
    }
    Ok((result.simplified(), g.complete))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IpVerdict {
    Yes,
    /// A reachable state with no integer point.
    No(SymbolicState),
    Unknown,
}

/// Checks that every reachable symbolic state contains an integer point.
/// Exploration merges only identical states, so every reachable zone is seen.
pub fn ip_check(pta: &Pta, limits: Limits, search_bound: u64) -> Result<IpVerdict, PtaError> {
    let g = explore(pta, limits, false, None)?;
    let mut all_yes = true;
    for s in &g.states {
        match s.zone.has_integer_point(search_bound) {
            IntegerPoint::Yes(_) => {}
            IntegerPoint::No => return Ok(IpVerdict::No(s.clone())),
            IntegerPoint::Unknown => all_yes = false,
        }
    }
    if all_yes && g.complete {
        Ok(IpVerdict::Yes)
    } else {
        Ok(IpVerdict::Unknown)
    }
}
