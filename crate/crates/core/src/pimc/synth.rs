use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Zero};

use crate::constraint::{AtomicConstraint, ConstraintSet, ConvexConstraint, LinearTerm, Rational, Rel, Var};

use super::{Endpoint, Pimc};

/// Which successors an avoid-set may name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AvoidScope {
    /// Subsets of the avoidable successors of the initial state only.
    Root,
    /// Subsets of the states avoidable from any state.
    #[default]
    Global,
}

fn term(e: &Endpoint) -> LinearTerm {
    match e {
        Endpoint::Num(x) => LinearTerm::constant(x.clone()),
        Endpoint::Param(p) => LinearTerm::var(Var::param(p)),
    }
}

fn context(pimc: &Pimc) -> Vec<Var> {
    pimc.params().iter().map(Var::param).collect()
}

fn unit_box(pimc: &Pimc) -> Vec<AtomicConstraint> {
    pimc.params()
        .iter()
        .flat_map(|p| {
            [
                AtomicConstraint::var_cmp(Var::param(p), Rel::Ge, Rational::zero()),
                AtomicConstraint::var_cmp(Var::param(p), Rel::Le, Rational::one()),
            ]
        })
        .collect()
}

fn lc_atoms(pimc: &Pimc, s: usize, keep: &BTreeSet<usize>) -> Vec<AtomicConstraint> {
    let mut up = LinearTerm::constant(-Rational::one());
    let mut low = LinearTerm::constant(-Rational::one());
    let mut atoms = Vec::new();
    for (t, iv) in pimc.succ(s) {
        if !keep.contains(&t) {
            continue;
        }
        up = up.add(&term(&iv.up));
        low = low.add(&term(&iv.low));
        atoms.push(AtomicConstraint::compare(term(&iv.low), Rel::Le, term(&iv.up)));
    }
    atoms.push(AtomicConstraint::new(up, Rel::Ge));
    atoms.push(AtomicConstraint::new(low, Rel::Le));
    atoms
}

/// Valuations under which the successors in `keep` admit a distribution
/// within their intervals, parameters bounded by `[0, 1]`.
pub fn lc_constraint(pimc: &Pimc, s: usize, keep: &BTreeSet<usize>) -> ConvexConstraint {
    let mut atoms = lc_atoms(pimc, s, keep);
    atoms.extend(unit_box(pimc));
    ConvexConstraint::new(context(pimc), atoms).expect("parameters are declared")
}

/// Successors that can receive probability 0: lower bound 0 or a parameter.
fn avoidable(pimc: &Pimc, s: usize) -> impl Iterator<Item = usize> + '_ {
    pimc.succ(s).filter_map(|(t, iv)| match &iv.low {
        Endpoint::Num(x) if !x.is_zero() => None,
        _ => Some(t),
    })
}

/// Valuations for which every state reachable from the initial state while
/// avoiding `x` is locally consistent and can give `x` probability 0.
fn cons_avoiding(pimc: &Pimc, x: &BTreeSet<usize>) -> ConvexConstraint {
    let mut atoms = unit_box(pimc);
    let mut seen = BTreeSet::from([pimc.initial()]);
    let mut queue = VecDeque::from([pimc.initial()]);
    while let Some(s) = queue.pop_front() {
        let keep: BTreeSet<usize> = pimc.succ(s).map(|(t, _)| t).filter(|t| !x.contains(t)).collect();
        atoms.extend(lc_atoms(pimc, s, &keep));
        for (t, iv) in pimc.succ(s) {
            if x.contains(&t) {
                atoms.push(AtomicConstraint::new(term(&iv.low), Rel::Eq));
            } else if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    ConvexConstraint::new(context(pimc), atoms).expect("parameters are declared")
}

fn subsets(items: &[usize]) -> impl Iterator<Item = BTreeSet<usize>> + '_ {
    (0u64..1 << items.len())
        .map(move |mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s).collect())
}

/// Parameter valuations in `[0, 1]` whose instance is consistent.
pub fn synthesize_consistency(pimc: &Pimc) -> ConstraintSet {
    synthesize_consistency_with(pimc, AvoidScope::Global)
}

pub fn synthesize_consistency_with(pimc: &Pimc, scope: AvoidScope) -> ConstraintSet {
    let candidates: BTreeSet<usize> = match scope {
        AvoidScope::Root => avoidable(pimc, pimc.initial()).collect(),
        AvoidScope::Global => (0..pimc.states().len())
            .flat_map(|s| avoidable(pimc, s).collect::<Vec<_>>())
            .filter(|s| *s != pimc.initial())
            .collect(),
    };
    let items: Vec<usize> = candidates.into_iter().collect();
    let mut result = ConstraintSet::empty(context(pimc));
    for x in subsets(&items) {
        let c = cons_avoiding(pimc, &x);
        if c.is_satisfiable() {
            result
                .union_absorbing(c.simplify())
                .expect("shared parameter context");
        }
    }
    result.simplified()
}
