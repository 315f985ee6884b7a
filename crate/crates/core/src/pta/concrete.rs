use num_traits::{Signed, Zero};

use crate::constraint::{Rational, Valuation};

use super::{Pta, PtaError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteState {
    pub location: usize,
    pub clocks: Valuation,
}

/// `states[0] --delays[0], edges[0]--> states[1] ...`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<ConcreteState>,
    pub delays: Vec<Rational>,
    pub edges: Vec<usize>,
    pub total_time: Rational,
    pub accepting: bool,
}

impl Run {
    pub fn last(&self) -> &ConcreteState {
        self.states.last().expect("a run has an initial state")
    }
}

fn shifted(w: &Valuation, d: &Rational) -> Valuation {
    w.iter().map(|(k, v)| (k.clone(), v + d)).collect()
}

fn holds(c: &crate::constraint::ConvexConstraint, w: &Valuation) -> bool {
    c.satisfies(w).unwrap_or(false)
}

/// Replays `(delay, edge index)` steps on a parameter-free automaton.
pub fn replay(ta: &Pta, script: &[(Rational, usize)]) -> Result<Run, PtaError> {
    if !ta.is_parameter_free() {
        return Err(PtaError::NotParameterFree);
    }
    let zero: Valuation = ta
        .clocks()
        .iter()
        .map(|c| (c.name().to_string(), Rational::zero()))
        .collect();
    let mut loc = ta.initial();
    if !holds(ta.invariant(loc), &zero) {
        return Err(PtaError::StepRejected {
            step: 0,
            reason: format!("initial state violates the invariant of `{}`", ta.location_name(loc)),
        });
    }
    let mut w = zero;
    let mut run = Run {
        states: vec![ConcreteState {
            location: loc,
            clocks: w.clone(),
        }],
        delays: Vec::new(),
        edges: Vec::new(),
        total_time: Rational::zero(),
        accepting: false,
    };
    for (i, (d, e)) in script.iter().enumerate() {
        let step = i + 1;
        let reject = |reason: String| PtaError::StepRejected { step, reason };
        if d.is_negative() {
            return Err(reject("negative delay".into()));
        }
        let edge = ta
            .edges()
            .get(*e)
            .ok_or_else(|| reject(format!("no edge with index {e}")))?;
        if edge.source != loc {
            return Err(reject(format!(
                "edge `{}` does not leave `{}`",
                edge.action,
                ta.location_name(loc)
            )));
        }
        // Invariants are convex, so checking the end point of the delay suffices.
        let after_delay = shifted(&w, d);
        if !holds(ta.invariant(loc), &after_delay) {
            return Err(reject(format!(
                "delay violates the invariant of `{}`",
                ta.location_name(loc)
            )));
        }
        if !holds(&edge.guard, &after_delay) {
            return Err(reject(format!("guard of `{}` does not hold", edge.action)));
        }
        let mut next = after_delay;
        for r in &edge.resets {
            next.set(r.name(), Rational::zero());
        }
        if !holds(ta.invariant(edge.target), &next) {
            return Err(reject(format!(
                "target invariant of `{}` violated",
                ta.location_name(edge.target)
            )));
        }
        loc = edge.target;
        w = next;
        run.total_time += d;
        run.delays.push(d.clone());
        run.edges.push(*e);
        run.states.push(ConcreteState {
            location: loc,
            clocks: w.clone(),
        });
    }
    run.accepting = ta.accepting().contains(&loc);
    Ok(run)
}

/// Untimed word, trace `l0 σ0 l1 σ1 …` and acceptance of a run.
pub fn words_and_trace(ta: &Pta, run: &Run) -> (Vec<String>, Vec<String>, bool) {
    let word: Vec<String> = run.edges.iter().map(|e| ta.edges()[*e].action.clone()).collect();
    let mut trace = vec![ta.location_name(run.states[0].location).to_string()];
    for (e, s) in run.edges.iter().zip(run.states.iter().skip(1)) {
        trace.push(ta.edges()[*e].action.clone());
        trace.push(ta.location_name(s.location).to_string());
    }
    (word, trace, run.accepting)
}
