use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, ToPrimitive};

use crate::constraint::{render, Valuation};

use super::PpnError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Weight {
    Num(u64),
    Param(String),
}

impl Weight {
    pub fn param(&self) -> Option<&str> {
        match self {
            Weight::Param(p) => Some(p),
            Weight::Num(_) => None,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Weight::Num(0))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Num(n) => write!(f, "{n}"),
            Weight::Param(p) => f.write_str(p),
        }
    }
}

/// A token count, `Omega` standing for arbitrarily many.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Fin(u64),
    Omega,
}

impl Count {
    pub fn covers(self, n: u64) -> bool {
        match self {
            Count::Omega => true,
            Count::Fin(m) => m >= n,
        }
    }

    fn add(self, o: Count) -> Count {
        match (self, o) {
            (Count::Fin(a), Count::Fin(b)) => Count::Fin(a + b),
            _ => Count::Omega,
        }
    }

    fn sub(self, n: u64) -> Count {
        match self {
            Count::Fin(a) => Count::Fin(a - n),
            Count::Omega => Count::Omega,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Fin(n) => write!(f, "{n}"),
            Count::Omega => f.write_str("ω"),
        }
    }
}

pub type Marking = Vec<u64>;
pub type OmegaMarking = Vec<Count>;

/// A net without parameters. Post weights and initial tokens may be ω.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    pub(crate) places: Vec<String>,
    pub(crate) transitions: Vec<String>,
    /// `pre[t][p]`
    pub(crate) pre: Vec<Vec<u64>>,
    pub(crate) post: Vec<Vec<Count>>,
    pub(crate) initial: Vec<Count>,
}

impl Net {
    pub fn new(
        places: Vec<String>,
        transitions: Vec<String>,
        pre: Vec<Vec<u64>>,
        post: Vec<Vec<Count>>,
        initial: Vec<Count>,
    ) -> Result<Net, PpnError> {
        let mut problems = Vec::new();
        shape(&places, &transitions, &mut problems);
        let np = places.len();
        if pre.len() != transitions.len()
            || post.len() != transitions.len()
            || pre.iter().any(|r| r.len() != np)
            || post.iter().any(|r| r.len() != np)
            || initial.len() != np
        {
            problems.push("incidence dimensions do not match places and transitions".into());
        }
        if !problems.is_empty() {
            return Err(PpnError::Invalid(problems));
        }
        Ok(Net {
            places,
            transitions,
            pre,
            post,
            initial,
        })
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn transitions(&self) -> &[String] {
        &self.transitions
    }

    pub fn pre(&self, t: usize) -> &[u64] {
        &self.pre[t]
    }

    pub fn post(&self, t: usize) -> &[Count] {
        &self.post[t]
    }

    pub fn initial(&self) -> &[Count] {
        &self.initial
    }

    pub fn has_omega(&self) -> bool {
        self.initial.contains(&Count::Omega) || self.post.iter().any(|r| r.contains(&Count::Omega))
    }

    /// The initial marking, when finite.
    pub fn initial_marking(&self) -> Option<Marking> {
        self.initial
            .iter()
            .map(|c| match c {
                Count::Fin(n) => Some(*n),
                Count::Omega => None,
            })
            .collect()
    }

    pub fn place_index(&self, name: &str) -> Option<usize> {
        self.places.iter().position(|p| p == name)
    }

    pub fn transition_index(&self, name: &str) -> Option<usize> {
        self.transitions.iter().position(|p| p == name)
    }

    pub(crate) fn enabled_omega(&self, m: &[Count], t: usize) -> bool {
        m.iter().zip(&self.pre[t]).all(|(c, w)| c.covers(*w))
    }

    pub(crate) fn fire_omega(&self, m: &[Count], t: usize) -> Option<OmegaMarking> {
        if !self.enabled_omega(m, t) {
            return None;
        }
        Some(
            m.iter()
                .zip(self.pre[t].iter().zip(&self.post[t]))
                .map(|(c, (w, o))| c.sub(*w).add(*o))
                .collect(),
        )
    }
}

/// `m - Pre(·, t) + Post(·, t)` if `t` is enabled. Transitions with an ω
/// post weight have no finite successor.
pub fn fire(net: &Net, m: &[u64], t: usize) -> Option<Marking> {
    let mut out = Vec::with_capacity(m.len());
    for ((have, need), add) in m.iter().zip(&net.pre[t]).zip(&net.post[t]) {
        if have < need {
            return None;
        }
        match add {
            Count::Fin(k) => out.push(have - need + k),
            Count::Omega => return None,
        }
    }
    Some(out)
}

fn shape(places: &[String], transitions: &[String], problems: &mut Vec<String>) {
    let p: BTreeSet<&String> = places.iter().collect();
    let t: BTreeSet<&String> = transitions.iter().collect();
    if p.len() != places.len() {
        problems.push("duplicate place names".into());
    }
    if t.len() != transitions.len() {
        problems.push("duplicate transition names".into());
    }
    for name in p.intersection(&t) {
        problems.push(format!("`{name}` is both a place and a transition"));
    }
}

/// Where parameters occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Subclass {
    /// Post weights and the initial marking are numeric.
    pub is_pre_t: bool,
    /// Pre weights and the initial marking are numeric.
    pub is_post_t: bool,
    /// No parameter occurs both on a pre and on a post arc.
    pub is_distinct_t: bool,
    /// Parameters occur in the initial marking only.
    pub is_p: bool,
    pub is_plain: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ppn {
    pub(crate) places: Vec<String>,
    pub(crate) transitions: Vec<String>,
    pub(crate) params: Vec<String>,
    pub(crate) pre: Vec<Vec<Weight>>,
    pub(crate) post: Vec<Vec<Weight>>,
    pub(crate) initial: Vec<Weight>,
}

impl Ppn {
    pub fn new(
        places: Vec<String>,
        transitions: Vec<String>,
        params: Vec<String>,
        pre: Vec<Vec<Weight>>,
        post: Vec<Vec<Weight>>,
        initial: Vec<Weight>,
    ) -> Result<Ppn, PpnError> {
        let mut problems = Vec::new();
        shape(&places, &transitions, &mut problems);
        let np = places.len();
        if pre.len() != transitions.len()
            || post.len() != transitions.len()
            || pre.iter().any(|r| r.len() != np)
            || post.iter().any(|r| r.len() != np)
            || initial.len() != np
        {
            problems.push("incidence dimensions do not match places and transitions".into());
        }
        let all = pre.iter().chain(&post).flatten().chain(&initial);
        for w in all {
            if let Some(p) = w.param() {
                if !params.iter().any(|x| x == p) {
                    let msg = format!("undeclared parameter `{p}`");
                    if !problems.contains(&msg) {
                        problems.push(msg);
                    }
                }
            }
        }
        if !problems.is_empty() {
            return Err(PpnError::Invalid(problems));
        }
        Ok(Ppn {
            places,
            transitions,
            params,
            pre,
            post,
            initial,
        })
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn transitions(&self) -> &[String] {
        &self.transitions
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn pre(&self, t: usize) -> &[Weight] {
        &self.pre[t]
    }

    pub fn post(&self, t: usize) -> &[Weight] {
        &self.post[t]
    }

    pub fn initial(&self) -> &[Weight] {
        &self.initial
    }

    pub fn place_index(&self, name: &str) -> Option<usize> {
        self.places.iter().position(|p| p == name)
    }

    /// Nonzero `(place, weight)` entries of a row.
    pub fn arcs<'a>(&'a self, row: &'a [Weight]) -> impl Iterator<Item = (&'a str, &'a Weight)> + 'a {
        self.places
            .iter()
            .zip(row)
            .filter(|(_, w)| !w.is_zero())
            .map(|(p, w)| (p.as_str(), w))
    }

    fn params_in<'a>(rows: impl IntoIterator<Item = &'a Weight>) -> BTreeSet<&'a str> {
        rows.into_iter().filter_map(Weight::param).collect()
    }

    pub fn classify(&self) -> Subclass {
        let pre = Ppn::params_in(self.pre.iter().flatten());
        let post = Ppn::params_in(self.post.iter().flatten());
        let init = Ppn::params_in(&self.initial);
        Subclass {
            is_pre_t: post.is_empty() && init.is_empty(),
            is_post_t: pre.is_empty() && init.is_empty(),
            is_distinct_t: pre.is_disjoint(&post),
            is_p: pre.is_empty() && post.is_empty(),
            is_plain: pre.is_empty() && post.is_empty() && init.is_empty(),
        }
    }

    /// Replaces every parameter by its value, which must be a natural number.
    pub fn instantiate(&self, v: &Valuation) -> Result<Net, PpnError> {
        let mut values = std::collections::BTreeMap::new();
        for p in &self.params {
            let x = v.get(p).ok_or_else(|| PpnError::MissingParameter(p.clone()))?;
            let n = if x.is_integer() && !x.is_negative() {
                x.to_integer().to_u64()
            } else {
                None
            };
            let n = n.ok_or_else(|| PpnError::NotNatural {
                param: p.clone(),
                value: render(x),
            })?;
            values.insert(p.as_str(), n);
        }
        let num = |w: &Weight| match w {
            Weight::Num(n) => *n,
            Weight::Param(p) => values[p.as_str()],
        };
        self.lower(|w| Count::Fin(num(w)), num)
    }

    /// Parametric post weights and initial entries become ω; parametric pre
    /// weights are rejected.
    pub fn omega_net(&self) -> Result<Net, PpnError> {
        if self.pre.iter().flatten().any(|w| w.param().is_some()) {
            return Err(PpnError::Invalid(vec!["parametric pre weights cannot be ω".into()]));
        }
        let num = |w: &Weight| match w {
            Weight::Num(n) => *n,
            Weight::Param(_) => unreachable!("checked above"),
        };
        self.lower(
            |w| match w {
                Weight::Num(n) => Count::Fin(*n),
                Weight::Param(_) => Count::Omega,
            },
            num,
        )
    }

    fn lower(&self, count: impl Fn(&Weight) -> Count, num: impl Fn(&Weight) -> u64) -> Result<Net, PpnError> {
        Net::new(
            self.places.clone(),
            self.transitions.clone(),
            self.pre.iter().map(|r| r.iter().map(&num).collect()).collect(),
            self.post.iter().map(|r| r.iter().map(&count).collect()).collect(),
            self.initial.iter().map(&count).collect(),
        )
    }
}
