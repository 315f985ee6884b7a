use std::collections::BTreeMap;
use std::fmt;

use super::rational::{render, Rational};

/// Assignment of rationals to variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation {
    values: BTreeMap<String, Rational>,
}

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: Rational) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, value: Rational) {
        self.values.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.values.get(name)
    }

    pub fn remove(&mut self, name: &str) -> Option<Rational> {
        self.values.remove(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.values.iter()
    }

    /// Entries of `other` override entries of `self`.
    pub fn merged(&self, other: &Valuation) -> Valuation {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.set(k.clone(), v.clone());
        }
        out
    }

    pub fn restricted<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Valuation {
        let mut out = Valuation::new();
        for n in names {
            if let Some(v) = self.values.get(n) {
                out.set(n, v.clone());
            }
        }
        out
    }
}

impl<S: Into<String>> FromIterator<(S, Rational)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (S, Rational)>>(iter: I) -> Self {
        let mut v = Valuation::new();
        for (k, r) in iter {
            v.set(k, r);
        }
        v
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (k, v)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}={}", k, render(v))?;
        }
        f.write_str(")")
    }
}
