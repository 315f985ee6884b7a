use super::formula::{Alpha, Formula};
use super::{Mts, MtsError, ParamValuation};

/// Action mask of `alpha` under `v`.
fn mask(m: &Mts, v: &ParamValuation, alpha: &Alpha) -> Result<u32, MtsError> {
    match alpha {
        Alpha::Var(y) => {
            let i = m
                .vars()
                .iter()
                .position(|x| x == y)
                .ok_or_else(|| MtsError::UnboundVariable(y.clone()))?;
            v.0.get(i).copied().ok_or_else(|| MtsError::UnboundVariable(y.clone()))
        }
        Alpha::Set(s) => {
            if s.is_empty() {
                return Err(MtsError::EmptyActionSet);
            }
            s.iter().try_fold(0u32, |acc, a| {
                let i = m.action_index(a).ok_or_else(|| MtsError::UnknownAction(a.clone()))?;
                Ok(acc | 1 << i)
            })
        }
    }
}

fn succs(m: &Mts, s: usize, b: u32) -> impl Iterator<Item = (usize, usize)> + '_ {
    m.out(s).iter().copied().filter(move |(a, _)| b >> a & 1 == 1)
}

fn pre(m: &Mts, b: u32, target: &[bool]) -> Vec<bool> {
    (0..m.states().len())
        .map(|s| succs(m, s, b).any(|(_, t)| target[t]))
        .collect()
}

fn fixpoint(start: Vec<bool>, mut step: impl FnMut(&[bool]) -> Vec<bool>) -> Vec<bool> {
    let mut cur = start;
    loop {
        let next = step(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn states_satisfying(m: &Mts, v: &ParamValuation, phi: &Formula) -> Result<Vec<bool>, MtsError> {
    let n = m.states().len();
    Ok(match phi {
        Formula::True => vec![true; n],
        Formula::Prop(p) => (0..n).map(|s| m.label(s).contains(p)).collect(),
        Formula::Not(f) => states_satisfying(m, v, f)?.into_iter().map(|x| !x).collect(),
        Formula::Or(a, b) => {
            let (x, y) = (states_satisfying(m, v, a)?, states_satisfying(m, v, b)?);
            x.iter().zip(&y).map(|(a, b)| *a || *b).collect()
        }
        Formula::Next(alpha, f) => pre(m, mask(m, v, alpha)?, &states_satisfying(m, v, f)?),
        Formula::GloballyOmega(alpha, f) => {
            let b = mask(m, v, alpha)?;
            let body = states_satisfying(m, v, f)?;
            fixpoint(vec![true; n], |cur| {
                let p = pre(m, b, cur);
                (0..n).map(|s| body[s] && p[s]).collect()
            })
        }
        Formula::Globally(alpha, f) => {
            let b = mask(m, v, alpha)?;
            let body = states_satisfying(m, v, f)?;
            fixpoint(vec![true; n], |cur| {
                let p = pre(m, b, cur);
                (0..n)
                    .map(|s| body[s] && (p[s] || succs(m, s, b).next().is_none()))
                    .collect()
            })
        }
        Formula::Until(alpha, f, g) => {
            let b = mask(m, v, alpha)?;
            let (ff, fg) = (states_satisfying(m, v, f)?, states_satisfying(m, v, g)?);
            fixpoint(vec![false; n], |cur| {
                let p = pre(m, b, cur);
                (0..n).map(|s| fg[s] || (ff[s] && p[s])).collect()
            })
        }
    })
}

/// Whether `phi` holds at `s` for the fixed valuation `v`.
pub fn eval_fixed(m: &Mts, v: &ParamValuation, phi: &Formula, s: usize) -> Result<bool, MtsError> {
    if s >= m.states().len() {
        return Err(MtsError::UnknownState(s.to_string()));
    }
    if v.0.len() != m.vars().len() || v.0.iter().any(|x| *x == 0) {
        return Err(MtsError::UnboundVariable(
            m.vars().get(v.0.len()).cloned().unwrap_or_default(),
        ));
    }
    Ok(states_satisfying(m, v, phi)?[s])
}

/// A path in lasso form: `states[i] -actions[i]-> states[i+1]`; when `lasso`
/// is `Some(k)` the last action leads back to `states[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub states: Vec<usize>,
    pub actions: Vec<usize>,
    pub lasso: Option<usize>,
    pub truncated: bool,
}

impl Path {
    /// A finite path that no allowed transition extends.
    pub fn is_maximal_finite(&self) -> bool {
        self.lasso.is_none() && !self.truncated
    }
}

/// All maximal paths over the action mask `b` from `s`, cycles folded into
/// lassos and depth cut at `bound` states.
pub fn enumerate_paths(m: &Mts, b: u32, s: usize, bound: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut states = vec![s];
    let mut actions = Vec::new();
    extend(m, b, bound.max(1), &mut states, &mut actions, &mut out);
    out
}

fn extend(
    m: &Mts,
    b: u32,
    bound: usize,
    states: &mut Vec<usize>,
    actions: &mut Vec<usize>,
    out: &mut Vec<Path>,
) {
    let last = *states.last().expect("paths are nonempty");
    let next: Vec<(usize, usize)> = succs(m, last, b).collect();
    if next.is_empty() {
        out.push(Path {
            states: states.clone(),
            actions: actions.clone(),
            lasso: None,
            truncated: false,
        });
        return;
    }
    for (a, t) in next {
        if let Some(k) = states.iter().position(|x| *x == t) {
            let mut acts = actions.clone();
            acts.push(a);
            out.push(Path {
                states: states.clone(),
                actions: acts,
                lasso: Some(k),
                truncated: false,
            });
        } else if states.len() >= bound {
            out.push(Path {
                states: states.clone(),
                actions: actions.clone(),
                lasso: None,
                truncated: true,
            });
        } else {
            states.push(t);
            actions.push(a);
            extend(m, b, bound, states, actions, out);
            states.pop();
            actions.pop();
        }
    }
}
