use super::formula::{Alpha, Formula};
use super::{Mts, MtsError, ParamValuation, Universe, ValuationSet};

/// One valuation set per state.
pub type StateValFun = Vec<ValuationSet>;

/// For each action, the valuations under which `alpha` allows it.
fn allowed(m: &Mts, u: &Universe, alpha: &Alpha) -> Result<Vec<ValuationSet>, MtsError> {
    match alpha {
        Alpha::Var(y) => {
            let i = m
                .vars()
                .iter()
                .position(|v| v == y)
                .ok_or_else(|| MtsError::UnboundVariable(y.clone()))?;
            Ok((0..m.actions().len())
                .map(|a| u.from_fn(|v| v.0[i] >> a & 1 == 1))
                .collect())
        }
        Alpha::Set(s) => {
            if s.is_empty() {
                return Err(MtsError::EmptyActionSet);
            }
            let mut out = vec![u.empty(); m.actions().len()];
            for name in s {
                let a = m
                    .action_index(name)
                    .ok_or_else(|| MtsError::UnknownAction(name.clone()))?;
                out[a] = u.full();
            }
            Ok(out)
        }
    }
}

fn pre_with(m: &Mts, u: &Universe, allow: &[ValuationSet], f: &[ValuationSet]) -> StateValFun {
    (0..m.states().len())
        .map(|s| {
            let mut r = u.empty();
            for &(a, t) in m.out(s) {
                r.union_with(&f[t].intersection(&allow[a]));
            }
            r
        })
        .collect()
}

/// `{ v | ∃ s -a-> s' with a ∈ v(y) and v ∈ f(s') }`, accumulated per transition.
pub fn par_pre(m: &Mts, f: &[ValuationSet], y: &Alpha) -> Result<StateValFun, MtsError> {
    let u = m.universe();
    let allow = allowed(m, &u, y)?;
    Ok(pre_with(m, &u, &allow, f))
}

/// Same as [`par_pre`], by testing every valuation of the universe.
pub fn par_pre_explicit(m: &Mts, f: &[ValuationSet], y: &Alpha) -> Result<StateValFun, MtsError> {
    let u = m.universe();
    let allows = |v: &ParamValuation, a: usize| -> Result<bool, MtsError> {
        match y {
            Alpha::Var(name) => {
                let i = m
                    .vars()
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| MtsError::UnboundVariable(name.clone()))?;
                Ok(v.0[i] >> a & 1 == 1)
            }
            Alpha::Set(s) => Ok(s.contains(&m.actions()[a])),
        }
    };
    let mut out = Vec::with_capacity(m.states().len());
    for s in 0..m.states().len() {
        let mut r = u.empty();
        for v in u.iter() {
            for &(a, t) in m.out(s) {
                if allows(&v, a)? && f[t].contains(&u, &v) {
                    r.insert(&u, &v);
                    break;
                }
            }
        }
        out.push(r);
    }
    Ok(out)
}

fn gfp(start: StateValFun, mut step: impl FnMut(&StateValFun) -> StateValFun) -> StateValFun {
    let mut cur = start;
    loop {
        let next = step(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// For every state, the valuations under which `phi` holds there.
pub fn synthesize(m: &Mts, phi: &Formula) -> Result<StateValFun, MtsError> {
    phi.validate(m)?;
    let u = m.universe();
    synth(m, &u, phi)
}

fn synth(m: &Mts, u: &Universe, phi: &Formula) -> Result<StateValFun, MtsError> {
    let n = m.states().len();
    Ok(match phi {
        Formula::True => vec![u.full(); n],
        Formula::Prop(p) => (0..n)
            .map(|s| if m.label(s).contains(p) { u.full() } else { u.empty() })
            .collect(),
        Formula::Not(f) => synth(m, u, f)?.iter().map(ValuationSet::complement).collect(),
        Formula::Or(a, b) => {
            let (fa, fb) = (synth(m, u, a)?, synth(m, u, b)?);
            fa.iter().zip(&fb).map(|(x, y)| x.union(y)).collect()
        }
        Formula::Next(alpha, f) => {
            let allow = allowed(m, u, alpha)?;
            pre_with(m, u, &allow, &synth(m, u, f)?)
        }
        Formula::GloballyOmega(alpha, f) => {
            let allow = allowed(m, u, alpha)?;
            let body = synth(m, u, f)?;
            gfp(vec![u.full(); n], |cur| {
                let pre = pre_with(m, u, &allow, cur);
                body.iter().zip(&pre).map(|(b, p)| b.intersection(p)).collect()
            })
        }
        Formula::Globally(alpha, f) => {
            let allow = allowed(m, u, alpha)?;
            let body = synth(m, u, f)?;
            // states without an allowed successor end a maximal finite path
            let stuck: StateValFun = pre_with(m, u, &allow, &vec![u.full(); n])
                .iter()
                .map(ValuationSet::complement)
                .collect();
            gfp(vec![u.full(); n], |cur| {
                let pre = pre_with(m, u, &allow, cur);
                (0..n)
                    .map(|s| body[s].intersection(&pre[s].union(&stuck[s])))
                    .collect()
            })
        }
        Formula::Until(alpha, f, g) => {
            let allow = allowed(m, u, alpha)?;
            let (ff, fg) = (synth(m, u, f)?, synth(m, u, g)?);
            let mut cur = vec![u.empty(); n];
            loop {
                let pre = pre_with(m, u, &allow, &cur);
                let next: StateValFun = (0..n)
                    .map(|s| fg[s].union(&ff[s].intersection(&pre[s])))
                    .collect();
                if next == cur {
                    break cur;
                }
                cur = next;
            }
        }
    })
}

/// Inclusion-minimal members of `vs`, sorted.
pub fn minimal_valuations(u: &Universe, vs: &ValuationSet) -> Vec<ParamValuation> {
    let members: Vec<ParamValuation> = vs.members(u).collect();
    let mut out: Vec<ParamValuation> = members
        .iter()
        .filter(|v| !members.iter().any(|w| w != *v && w.le(v)))
        .cloned()
        .collect();
    out.sort();
    out
}
