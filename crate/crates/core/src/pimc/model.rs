use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::constraint::{render, Rational, Valuation};

use super::PimcError;

/// `M(s, ·)` rows hold the positive entries only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mc {
    states: Vec<String>,
    initial: usize,
    labels: Vec<BTreeSet<String>>,
    rows: Vec<Vec<(usize, Rational)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub low: Rational,
    pub up: Rational,
}

impl Interval {
    pub fn new(low: Rational, up: Rational) -> Self {
        Interval { low, up }
    }

    pub fn point(p: Rational) -> Self {
        Interval {
            low: p.clone(),
            up: p,
        }
    }

    pub fn zero() -> Self {
        Interval::point(Rational::zero())
    }

    pub fn is_well_formed(&self) -> bool {
        self.low <= self.up
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.low <= x && x <= &self.up
    }

    pub fn is_zero(&self) -> bool {
        self.low.is_zero() && self.up.is_zero()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", render(&self.low), render(&self.up))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Num(Rational),
    Param(String),
}

impl Endpoint {
    fn is_zero(&self) -> bool {
        matches!(self, Endpoint::Num(x) if x.is_zero())
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Num(x) => f.write_str(&render(x)),
            Endpoint::Param(p) => f.write_str(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamInterval {
    pub low: Endpoint,
    pub up: Endpoint,
}

impl ParamInterval {
    pub fn numeric(low: Rational, up: Rational) -> Self {
        ParamInterval {
            low: Endpoint::Num(low),
            up: Endpoint::Num(up),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.low.is_zero() && self.up.is_zero()
    }
}

impl fmt::Display for ParamInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.low, self.up)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Imc {
    states: Vec<String>,
    initial: usize,
    labels: Vec<BTreeSet<String>>,
    trans: Vec<Vec<(usize, Interval)>>,
}

/// Interval endpoints may be parameters ranging over `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pimc {
    states: Vec<String>,
    initial: usize,
    labels: Vec<BTreeSet<String>>,
    params: Vec<String>,
    trans: Vec<Vec<(usize, ParamInterval)>>,
}

fn check_shape<T>(
    states: &[String],
    initial: usize,
    labels: &[BTreeSet<String>],
    rows: &[Vec<(usize, T)>],
    problems: &mut Vec<String>,
) {
    if states.is_empty() {
        problems.push("no states".into());
    }
    let distinct: BTreeSet<&String> = states.iter().collect();
    if distinct.len() != states.len() {
        problems.push("duplicate state names".into());
    }
    if initial >= states.len() && !states.is_empty() {
        problems.push(format!("initial state index {initial} out of range"));
    }
    if labels.len() != states.len() || rows.len() != states.len() {
        problems.push("labels and transitions must cover every state".into());
    }
    for (s, row) in rows.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for (t, _) in row {
            if *t >= states.len() {
                problems.push(format!("transition from state {s} to unknown state {t}"));
            } else if !seen.insert(*t) {
                let name = states.get(s).map(String::as_str).unwrap_or("?");
                problems.push(format!("duplicate transition {name} -> {}", states[*t]));
            }
        }
    }
}

fn in_unit(x: &Rational) -> bool {
    !x.is_negative() && x <= &Rational::one()
}

impl Mc {
    pub fn new(
        states: Vec<String>,
        initial: usize,
        labels: Vec<BTreeSet<String>>,
        rows: Vec<Vec<(usize, Rational)>>,
    ) -> Result<Mc, PimcError> {
        let mut problems = Vec::new();
        check_shape(&states, initial, &labels, &rows, &mut problems);
        for (s, row) in rows.iter().enumerate() {
            let name = states.get(s).map(String::as_str).unwrap_or("?");
            if row.iter().any(|(_, p)| !in_unit(p)) {
                problems.push(format!("probability outside [0, 1] leaving `{name}`"));
            }
            let total: Rational = row.iter().map(|(_, p)| p.clone()).sum();
            if !total.is_one() {
                problems.push(format!("row of `{name}` sums to {}", render(&total)));
            }
        }
        if !problems.is_empty() {
            return Err(PimcError::Invalid(problems));
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, p)| !p.is_zero()).collect())
            .collect();
        Ok(Mc {
            states,
            initial,
            labels,
            rows,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn label(&self, s: usize) -> &BTreeSet<String> {
        &self.labels[s]
    }

    pub fn row(&self, s: usize) -> &[(usize, Rational)] {
        &self.rows[s]
    }

    pub fn prob(&self, s: usize, t: usize) -> Rational {
        self.rows[s]
            .iter()
            .find(|(u, _)| *u == t)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }
}

impl Imc {
    pub fn new(
        states: Vec<String>,
        initial: usize,
        labels: Vec<BTreeSet<String>>,
        trans: Vec<Vec<(usize, Interval)>>,
    ) -> Result<Imc, PimcError> {
        let mut problems = Vec::new();
        check_shape(&states, initial, &labels, &trans, &mut problems);
        for (s, row) in trans.iter().enumerate() {
            for (t, i) in row {
                if !in_unit(&i.low) || !in_unit(&i.up) {
                    problems.push(format!("interval {i} on transition {s} -> {t} leaves [0, 1]"));
                }
            }
        }
        if !problems.is_empty() {
            return Err(PimcError::Invalid(problems));
        }
        Ok(Imc {
            states,
            initial,
            labels,
            trans,
        })
    }

    /// `φ(s, s') = [M(s, s'), M(s, s')]` with the labels of `mc`.
    pub fn point(mc: &Mc) -> Imc {
        Imc {
            states: mc.states.clone(),
            initial: mc.initial,
            labels: mc.labels.clone(),
            trans: mc
                .rows
                .iter()
                .map(|r| r.iter().map(|(t, p)| (*t, Interval::point(p.clone()))).collect())
                .collect(),
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn label(&self, s: usize) -> &BTreeSet<String> {
        &self.labels[s]
    }

    pub fn labels(&self) -> &[BTreeSet<String>] {
        &self.labels
    }

    /// Declared transitions leaving `s`, in declaration order.
    pub fn transitions(&self, s: usize) -> &[(usize, Interval)] {
        &self.trans[s]
    }

    /// Undeclared transitions are `[0, 0]`.
    pub fn phi(&self, s: usize, t: usize) -> Interval {
        self.trans[s]
            .iter()
            .find(|(u, _)| *u == t)
            .map(|(_, i)| i.clone())
            .unwrap_or_else(Interval::zero)
    }

    /// Successors whose interval is not `[0, 0]`.
    pub fn succ(&self, s: usize) -> impl Iterator<Item = (usize, &Interval)> {
        self.trans[s].iter().filter(|(_, i)| !i.is_zero()).map(|(t, i)| (*t, i))
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }
}

impl Pimc {
    pub fn new(
        states: Vec<String>,
        initial: usize,
        labels: Vec<BTreeSet<String>>,
        params: Vec<String>,
        trans: Vec<Vec<(usize, ParamInterval)>>,
    ) -> Result<Pimc, PimcError> {
        let mut problems = Vec::new();
        check_shape(&states, initial, &labels, &trans, &mut problems);
        for (s, row) in trans.iter().enumerate() {
            for (t, i) in row {
                for e in [&i.low, &i.up] {
                    match e {
                        Endpoint::Num(x) if !in_unit(x) => problems
                            .push(format!("interval {i} on transition {s} -> {t} leaves [0, 1]")),
                        Endpoint::Param(p) if !params.contains(p) => {
                            problems.push(format!("undeclared parameter `{p}`"))
                        }
                        _ => {}
                    }
                }
            }
        }
        if !problems.is_empty() {
            return Err(PimcError::Invalid(problems));
        }
        Ok(Pimc {
            states,
            initial,
            labels,
            params,
            trans,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn label(&self, s: usize) -> &BTreeSet<String> {
        &self.labels[s]
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn transitions(&self, s: usize) -> &[(usize, ParamInterval)] {
        &self.trans[s]
    }

    pub fn succ(&self, s: usize) -> impl Iterator<Item = (usize, &ParamInterval)> {
        self.trans[s].iter().filter(|(_, i)| !i.is_zero()).map(|(t, i)| (*t, i))
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    /// The IMC obtained by replacing every parameter by its value.
    pub fn instantiate(&self, psi: &Valuation) -> Result<Imc, PimcError> {
        for p in &self.params {
            let v = psi
                .get(p)
                .ok_or_else(|| PimcError::MissingParameter(p.clone()))?;
            if !in_unit(v) {
                return Err(PimcError::OutOfRange {
                    param: p.clone(),
                    value: render(v),
                });
            }
        }
        let value = |e: &Endpoint| match e {
            Endpoint::Num(x) => x.clone(),
            Endpoint::Param(p) => psi.get(p).expect("checked above").clone(),
        };
        let trans = self
            .trans
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(t, i)| (*t, Interval::new(value(&i.low), value(&i.up))))
                    .collect()
            })
            .collect();
        Ok(Imc {
            states: self.states.clone(),
            initial: self.initial,
            labels: self.labels.clone(),
            trans,
        })
    }
}

impl From<Imc> for Pimc {
    fn from(imc: Imc) -> Pimc {
        Pimc {
            states: imc.states,
            initial: imc.initial,
            labels: imc.labels,
            params: Vec::new(),
            trans: imc
                .trans
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|(t, i)| (t, ParamInterval::numeric(i.low, i.up)))
                        .collect()
                })
                .collect(),
        }
    }
}
