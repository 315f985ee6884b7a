use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::constraint::{AtomicConstraint, ConvexConstraint, LinearTerm, Rational, Rel, Var};

use super::{Imc, Mc, PimcError};

/// A satisfaction relation with one correspondence function per pair:
/// `delta[(t, s)][t'][s']` is the share of `t -> t'` assigned to `s -> s'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceWitness {
    pub relation: BTreeSet<(usize, usize)>,
    pub delta: BTreeMap<(usize, usize), BTreeMap<usize, BTreeMap<usize, Rational>>>,
}

fn delta_var(t: usize, s: usize) -> Var {
    Var::aux(format!("d_{t}_{s}"))
}

/// Looks for a correspondence function for `(t, s)` whose support stays in `rel`.
fn correspondence(
    mc: &Mc,
    imc: &Imc,
    t: usize,
    s: usize,
    rel: &BTreeSet<(usize, usize)>,
) -> Option<BTreeMap<usize, BTreeMap<usize, Rational>>> {
    let n = imc.states().len();
    let mut vars = Vec::new();
    let mut atoms = Vec::new();
    // x(t', s') for the pairs that may carry mass
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (t2, _) in mc.row(t) {
        let mut any = false;
        for s2 in 0..n {
            if rel.contains(&(*t2, s2)) && !imc.phi(s, s2).up.is_zero() {
                cells.push((*t2, s2));
                any = true;
            }
        }
        if !any {
            return None;
        }
    }
    for (t2, s2) in &cells {
        let v = delta_var(*t2, *s2);
        atoms.push(AtomicConstraint::var_cmp(v.clone(), Rel::Ge, Rational::zero()));
        vars.push(v);
    }
    for (t2, _) in mc.row(t) {
        let mut sum = LinearTerm::constant(-Rational::one());
        for (a, b) in cells.iter().filter(|(a, _)| a == t2) {
            sum.add_coeff(delta_var(*a, *b), 1.into());
        }
        atoms.push(AtomicConstraint::new(sum, Rel::Eq));
    }
    for s2 in 0..n {
        let iv = imc.phi(s, s2);
        let parts: Vec<(Var, Rational)> = cells
            .iter()
            .filter(|(_, b)| *b == s2)
            .map(|(a, b)| (delta_var(*a, *b), mc.prob(t, *a)))
            .collect();
        if parts.is_empty() {
            if !iv.contains(&Rational::zero()) {
                return None;
            }
            continue;
        }
        atoms.push(AtomicConstraint::new(
            LinearTerm::from_rational(parts.clone(), -iv.low.clone()),
            Rel::Ge,
        ));
        atoms.push(AtomicConstraint::new(
            LinearTerm::from_rational(parts, -iv.up.clone()),
            Rel::Le,
        ));
    }
    let c = ConvexConstraint::new(vars, atoms).expect("variables are declared");
    let point = c.find_point()?;
    let mut delta: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
    for (t2, s2) in cells {
        let x = point
            .get(delta_var(t2, s2).name())
            .cloned()
            .unwrap_or_else(Rational::zero);
        if !x.is_zero() {
            delta.entry(t2).or_default().insert(s2, x);
        }
    }
    Some(delta)
}

/// Computes the greatest satisfaction relation between `mc` and `imc` and
/// reports whether it relates the initial states.
pub fn satisfies(mc: &Mc, imc: &Imc) -> (bool, Option<CorrespondenceWitness>) {
    let mut rel: BTreeSet<(usize, usize)> = BTreeSet::new();
    for t in 0..mc.states().len() {
        for s in 0..imc.states().len() {
            if mc.label(t) == imc.label(s) {
                rel.insert((t, s));
            }
        }
    }
    loop {
        let dead: Vec<(usize, usize)> = rel
            .iter()
            .filter(|(t, s)| correspondence(mc, imc, *t, *s, &rel).is_none())
            .copied()
            .collect();
        if dead.is_empty() {
            break;
        }
        for d in dead {
            rel.remove(&d);
        }
    }
    if !rel.contains(&(mc.initial(), imc.initial())) {
        return (false, None);
    }
    let delta = rel
        .iter()
        .map(|&(t, s)| {
            let d = correspondence(mc, imc, t, s, &rel).expect("pair survived refinement");
            ((t, s), d)
        })
        .collect();
    (true, Some(CorrespondenceWitness { relation: rel, delta }))
}

/// Whether the intervals to `keep` admit a distribution, assuming every other
/// successor receives probability 0.
fn locally_consistent(imc: &Imc, s: usize, keep: &BTreeSet<usize>) -> bool {
    let mut up = Rational::zero();
    let mut low = Rational::zero();
    for (t, iv) in imc.succ(s) {
        if keep.contains(&t) {
            if !iv.is_well_formed() {
                return false;
            }
            up += &iv.up;
            low += &iv.low;
        } else if !iv.low.is_zero() {
            return false;
        }
    }
    up >= Rational::one() && low <= Rational::one()
}

/// `k`-consistent states for `k = 0..=n` (or until the sets stabilise).
fn consistency_rounds(imc: &Imc, n: usize) -> BTreeSet<usize> {
    let all: BTreeSet<usize> = (0..imc.states().len()).collect();
    let mut current: BTreeSet<usize> = all
        .iter()
        .copied()
        .filter(|&s| locally_consistent(imc, s, &imc.succ(s).map(|(t, _)| t).collect()))
        .collect();
    for _ in 0..n {
        let next: BTreeSet<usize> = all
            .iter()
            .copied()
            .filter(|&s| {
                let keep = imc.succ(s).map(|(t, _)| t).filter(|t| current.contains(t)).collect();
                locally_consistent(imc, s, &keep)
            })
            .collect();
        if next == current {
            break;
        }
        current = next;
    }
    current
}

/// `s` is `n`-consistent: some distribution within its intervals only puts
/// mass on `(n-1)`-consistent successors.
///
/// Taking every `(n-1)`-consistent successor as the support is no loss of
/// generality: one with lower bound 0 only raises the available upper mass,
/// and one with a positive lower bound cannot be left out at all.
pub fn n_consistent(imc: &Imc, s: usize, n: usize) -> Result<bool, PimcError> {
    if s >= imc.states().len() {
        return Err(PimcError::UnknownState(s.to_string()));
    }
    Ok(consistency_rounds(imc, n).contains(&s))
}

/// Decides consistency and, when consistent, returns an implementation with
/// the structure of `imc`: each consistent successor gets its lower bound and
/// the remaining mass is handed out up to the upper bounds in declaration order.
pub fn is_consistent(imc: &Imc) -> (bool, Option<Mc>) {
    let n = imc.states().len();
    let good = consistency_rounds(imc, n);
    if !good.contains(&imc.initial()) {
        return (false, None);
    }
    let rows = (0..n)
        .map(|s| {
            if !good.contains(&s) {
                return vec![(s, Rational::one())];
            }
            let kept: Vec<(usize, &crate::pimc::Interval)> =
                imc.succ(s).filter(|(t, _)| good.contains(t)).collect();
            let mut residual = Rational::one();
            let mut row: Vec<(usize, Rational)> = kept
                .iter()
                .map(|(t, iv)| {
                    residual -= &iv.low;
                    (*t, iv.low.clone())
                })
                .collect();
            for ((_, iv), entry) in kept.iter().zip(row.iter_mut()) {
                if residual.is_zero() {
                    break;
                }
                let room = &iv.up - &iv.low;
                let extra = if room < residual { room } else { residual.clone() };
                residual -= &extra;
                entry.1 += extra;
            }
            row
        })
        .collect();
    let mc = Mc::new(imc.states().to_vec(), imc.initial(), imc.labels().to_vec(), rows)
        .expect("greedy assignment of a locally consistent state is a distribution");
    (true, Some(mc))
}
