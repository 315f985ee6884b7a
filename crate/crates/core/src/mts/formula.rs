use std::collections::BTreeSet;
use std::fmt;

use super::{Mts, MtsError};

/// Path-quantifier subscript: a variable or a fixed nonempty action set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Alpha {
    Var(String),
    Set(BTreeSet<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Prop(String),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Alpha, Box<Formula>),
    /// Over maximal paths, finite ones included.
    Globally(Alpha, Box<Formula>),
    /// Over infinite paths only.
    GloballyOmega(Alpha, Box<Formula>),
    Until(Alpha, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn prop(p: &str) -> Formula {
        Formula::Prop(p.to_string())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    pub fn falsum() -> Formula {
        Formula::not(Formula::True)
    }

    pub fn next(a: Alpha, f: Formula) -> Formula {
        Formula::Next(a, Box::new(f))
    }

    pub fn globally(a: Alpha, f: Formula) -> Formula {
        Formula::Globally(a, Box::new(f))
    }

    pub fn globally_omega(a: Alpha, f: Formula) -> Formula {
        Formula::GloballyOmega(a, Box::new(f))
    }

    pub fn until(a: Alpha, f: Formula, g: Formula) -> Formula {
        Formula::Until(a, Box::new(f), Box::new(g))
    }

    /// `E_α F φ = E_α(true U φ)`.
    pub fn eventually(a: Alpha, f: Formula) -> Formula {
        Formula::until(a, Formula::True, f)
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            let a = match f {
                Formula::Next(a, _)
                | Formula::Globally(a, _)
                | Formula::GloballyOmega(a, _)
                | Formula::Until(a, _, _) => a,
                _ => return,
            };
            if let Alpha::Var(v) = a {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        });
        out
    }

    fn walk(&self, visit: &mut impl FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::True | Formula::Prop(_) => {}
            Formula::Not(f) | Formula::Next(_, f) | Formula::Globally(_, f) | Formula::GloballyOmega(_, f) => {
                f.walk(visit)
            }
            Formula::Or(a, b) | Formula::Until(_, a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
        }
    }

    /// Checks variables and action names against `m`.
    pub fn validate(&self, m: &Mts) -> Result<(), MtsError> {
        let mut err = None;
        self.walk(&mut |f| {
            let a = match f {
                Formula::Next(a, _)
                | Formula::Globally(a, _)
                | Formula::GloballyOmega(a, _)
                | Formula::Until(a, _, _) => a,
                _ => return,
            };
            let e = match a {
                Alpha::Var(v) if !m.vars().contains(v) => Some(MtsError::UnboundVariable(v.clone())),
                Alpha::Set(s) if s.is_empty() => Some(MtsError::EmptyActionSet),
                Alpha::Set(s) => s
                    .iter()
                    .find(|x| m.action_index(x).is_none())
                    .map(|x| MtsError::UnknownAction(x.clone())),
                _ => None,
            };
            if err.is_none() {
                err = e;
            }
        });
        err.map_or(Ok(()), Err)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Var(v) => f.write_str(v),
            Alpha::Set(s) => write!(f, "{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(", ")),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Prop(p) => f.write_str(p),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Next(a, g) => write!(f, "E[{a}] X {g}"),
            Formula::Globally(a, g) => write!(f, "E[{a}] G {g}"),
            Formula::GloballyOmega(a, g) => write!(f, "Ew[{a}] G {g}"),
            Formula::Until(a, g, h) => write!(f, "E[{a}]({g} U {h})"),
        }
    }
}
