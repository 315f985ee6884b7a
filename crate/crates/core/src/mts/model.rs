use std::collections::BTreeSet;

use super::{MtsError, Universe, MAX_ACTIONS, MAX_VARS};

/// States, actions and labels are referred to by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mts {
    states: Vec<String>,
    initial: usize,
    actions: Vec<String>,
    vars: Vec<String>,
    transitions: Vec<(usize, usize, usize)>,
    labels: Vec<BTreeSet<String>>,
    out: Vec<Vec<(usize, usize)>>,
}

impl Mts {
    /// `transitions` are `(source, action, target)` triples.
    pub fn new(
        states: Vec<String>,
        initial: usize,
        actions: Vec<String>,
        vars: Vec<String>,
        transitions: Vec<(usize, usize, usize)>,
        labels: Vec<BTreeSet<String>>,
    ) -> Result<Mts, MtsError> {
        if actions.len() > MAX_ACTIONS || vars.len() > MAX_VARS {
            return Err(MtsError::TooLarge {
                actions: actions.len(),
                vars: vars.len(),
            });
        }
        let mut problems = Vec::new();
        if states.is_empty() {
            problems.push("no states".to_string());
        } else if initial >= states.len() {
            problems.push(format!("initial state index {initial} out of range"));
        }
        if actions.is_empty() {
            problems.push("the action set must be nonempty".to_string());
        }
        if labels.len() != states.len() {
            problems.push("every state needs a label set".to_string());
        }
        for (kind, names) in [("state", &states), ("action", &actions), ("variable", &vars)] {
            let distinct: BTreeSet<&String> = names.iter().collect();
            if distinct.len() != names.len() {
                problems.push(format!("duplicate {kind} names"));
            }
        }
        for &(s, a, t) in &transitions {
            if s >= states.len() || t >= states.len() || a >= actions.len() {
                problems.push(format!("transition ({s}, {a}, {t}) uses undeclared elements"));
            }
        }
        if !problems.is_empty() {
            return Err(MtsError::Invalid(problems));
        }
        let mut transitions = transitions;
        let mut seen = BTreeSet::new();
        transitions.retain(|t| seen.insert(*t));
        let mut out = vec![Vec::new(); states.len()];
        for &(s, a, t) in &transitions {
            out[s].push((a, t));
        }
        Ok(Mts {
            states,
            initial,
            actions,
            vars,
            transitions,
            labels,
            out,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn transitions(&self) -> &[(usize, usize, usize)] {
        &self.transitions
    }

    pub fn label(&self, s: usize) -> &BTreeSet<String> {
        &self.labels[s]
    }

    /// `(action, target)` pairs leaving `s`.
    pub fn out(&self, s: usize) -> &[(usize, usize)] {
        &self.out[s]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|s| s == name)
    }

    pub fn universe(&self) -> Universe {
        Universe::new(self.actions.clone(), self.vars.clone())
    }
}
