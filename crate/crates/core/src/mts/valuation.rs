use std::fmt;

use fixedbitset::FixedBitSet;

/// Assignment of a nonempty action set (bit mask over the alphabet) to each
/// variable, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamValuation(pub Vec<u32>);

impl ParamValuation {
    /// Pointwise inclusion.
    pub fn le(&self, other: &ParamValuation) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// All valuations over fixed actions and variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    actions: Vec<String>,
    vars: Vec<String>,
}

impl Universe {
    pub fn new(actions: Vec<String>, vars: Vec<String>) -> Self {
        Universe { actions, vars }
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of nonempty action sets.
    fn radix(&self) -> usize {
        (1usize << self.actions.len()) - 1
    }

    pub fn size(&self) -> usize {
        self.radix().pow(self.vars.len() as u32)
    }

    pub fn index(&self, v: &ParamValuation) -> usize {
        let r = self.radix();
        v.0.iter().rev().fold(0, |acc, m| acc * r + (*m as usize - 1))
    }

    pub fn valuation(&self, mut i: usize) -> ParamValuation {
        let r = self.radix();
        let mut out = Vec::with_capacity(self.vars.len());
        for _ in 0..self.vars.len() {
            out.push((i % r + 1) as u32);
            i /= r;
        }
        ParamValuation(out)
    }

    pub fn empty(&self) -> ValuationSet {
        ValuationSet(FixedBitSet::with_capacity(self.size()))
    }

    pub fn full(&self) -> ValuationSet {
        let mut b = FixedBitSet::with_capacity(self.size());
        b.insert_range(..);
        ValuationSet(b)
    }

    pub fn from_fn(&self, mut keep: impl FnMut(&ParamValuation) -> bool) -> ValuationSet {
        let mut b = FixedBitSet::with_capacity(self.size());
        for i in 0..self.size() {
            if keep(&self.valuation(i)) {
                b.insert(i);
            }
        }
        ValuationSet(b)
    }

    pub fn iter(&self) -> impl Iterator<Item = ParamValuation> + '_ {
        (0..self.size()).map(|i| self.valuation(i))
    }

    pub fn action_set(&self, mask: u32) -> Vec<&str> {
        (0..self.actions.len())
            .filter(|a| mask >> a & 1 == 1)
            .map(|a| self.actions[a].as_str())
            .collect()
    }

    pub fn display<'a>(&'a self, v: &'a ParamValuation) -> impl fmt::Display + 'a {
        DisplayValuation { u: self, v }
    }
}

struct DisplayValuation<'a> {
    u: &'a Universe,
    v: &'a ParamValuation,
}

impl fmt::Display for DisplayValuation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (name, m)) in self.u.vars.iter().zip(&self.v.0).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={{{}}}", self.u.action_set(*m).join(","))?;
        }
        f.write_str(")")
    }
}

/// A set of valuations, as a bit set indexed by [`Universe::index`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationSet(FixedBitSet);

impl ValuationSet {
    pub fn contains_index(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn contains(&self, u: &Universe, v: &ParamValuation) -> bool {
        self.0.contains(u.index(v))
    }

    pub fn insert(&mut self, u: &Universe, v: &ParamValuation) {
        self.0.insert(u.index(v));
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn union_with(&mut self, o: &ValuationSet) {
        self.0.union_with(&o.0);
    }

    pub fn intersect_with(&mut self, o: &ValuationSet) {
        self.0.intersect_with(&o.0);
    }

    pub fn union(&self, o: &ValuationSet) -> ValuationSet {
        let mut r = self.clone();
        r.union_with(o);
        r
    }

    pub fn intersection(&self, o: &ValuationSet) -> ValuationSet {
        let mut r = self.clone();
        r.intersect_with(o);
        r
    }

    pub fn complement(&self) -> ValuationSet {
        let mut r = self.clone();
        r.0.toggle_range(..);
        r
    }

    pub fn is_subset(&self, o: &ValuationSet) -> bool {
        self.0.is_subset(&o.0)
    }

    /// Members in canonical (index) order.
    pub fn members<'a>(&'a self, u: &'a Universe) -> impl Iterator<Item = ParamValuation> + 'a {
        self.0.ones().map(|i| u.valuation(i))
    }
}
