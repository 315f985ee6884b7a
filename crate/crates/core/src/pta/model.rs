use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed};

use crate::constraint::{AtomicConstraint, ConvexConstraint, Rational, Valuation, Var};

use super::PtaError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub action: String,
    pub guard: ConvexConstraint,
    pub resets: Vec<Var>,
}

/// A parametric timed automaton. All guards and invariants share the
/// context `clocks ++ params`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pta {
    pub(crate) clocks: Vec<Var>,
    pub(crate) params: Vec<Var>,
    pub(crate) locations: Vec<String>,
    pub(crate) initial: usize,
    pub(crate) accepting: BTreeSet<usize>,
    pub(crate) invariants: Vec<ConvexConstraint>,
    pub(crate) edges: Vec<Edge>,
    pub(crate) bounds: BTreeMap<String, (Rational, Rational)>,
}

impl Pta {
    pub fn clocks(&self) -> &[Var] {
        &self.clocks
    }

    pub fn params(&self) -> &[Var] {
        &self.params
    }

    pub fn context(&self) -> Vec<Var> {
        self.clocks.iter().chain(self.params.iter()).cloned().collect()
    }

    pub fn locations(&self) -> &[String] {
        &self.locations
    }

    pub fn location_name(&self, l: usize) -> &str {
        &self.locations[l]
    }

    pub fn location_index(&self, name: &str) -> Option<usize> {
        self.locations.iter().position(|l| l == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn invariant(&self, l: usize) -> &ConvexConstraint {
        &self.invariants[l]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_from(&self, l: usize) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(move |(_, e)| e.source == l)
    }

    /// First edge leaving `source` labelled `action`.
    pub fn edge_index(&self, source: &str, action: &str) -> Option<usize> {
        let l = self.location_index(source)?;
        self.edges_from(l).find(|(_, e)| e.action == action).map(|(i, _)| i)
    }

    pub fn actions(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self.edges.iter().map(|e| &e.action).collect();
        set.into_iter().cloned().collect()
    }

    /// Declared parameter intervals.
    pub fn bounds(&self) -> &BTreeMap<String, (Rational, Rational)> {
        &self.bounds
    }

    pub fn is_parameter_free(&self) -> bool {
        self.params.is_empty()
    }

    /// Resolves location names.
    pub fn locations_named(&self, names: &[String]) -> Result<BTreeSet<usize>, PtaError> {
        names
            .iter()
            .map(|n| {
                self.location_index(n)
                    .ok_or_else(|| PtaError::UnknownLocation(n.clone()))
            })
            .collect()
    }

    /// Replaces every parameter by its value. Values must be non-negative.
    pub fn instantiate(&self, v: &Valuation) -> Result<Pta, PtaError> {
        let mut param_val = Valuation::new();
        for p in &self.params {
            let x = v
                .get(p.name())
                .ok_or_else(|| PtaError::MissingParameter(p.name().to_string()))?;
            if x.is_negative() {
                return Err(PtaError::NegativeParameter(p.name().to_string()));
            }
            param_val.set(p.name(), x.clone());
        }
        let sub = |c: &ConvexConstraint| c.substitute(&param_val);
        Ok(Pta {
            clocks: self.clocks.clone(),
            params: Vec::new(),
            locations: self.locations.clone(),
            initial: self.initial,
            accepting: self.accepting.clone(),
            invariants: self.invariants.iter().map(sub).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    guard: sub(&e.guard),
                    ..e.clone()
                })
                .collect(),
            bounds: BTreeMap::new(),
        })
    }

    /// Same automaton with atoms rewritten by `f` (context unchanged).
    pub(crate) fn map_constraints<F>(&self, params: Vec<Var>, mut f: F) -> Pta
    where
        F: FnMut(&ConvexConstraint) -> ConvexConstraint,
    {
        Pta {
            clocks: self.clocks.clone(),
            params,
            locations: self.locations.clone(),
            initial: self.initial,
            accepting: self.accepting.clone(),
            invariants: self.invariants.iter().map(&mut f).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    guard: f(&e.guard),
                    ..e.clone()
                })
                .collect(),
            bounds: BTreeMap::new(),
        }
    }
}

/// Checks the parametric guard shape: exactly one clock with coefficient ±1,
/// everything else parameters or constant. Ground atoms are allowed.
pub(crate) fn check_guard_shape(c: &ConvexConstraint, what: &str, problems: &mut Vec<String>) {
    for a in c.atoms() {
        if a.is_ground() {
            continue;
        }
        let clocks: Vec<(&Var, _)> = a.term.coeffs().iter().filter(|(v, _)| v.is_clock()).collect();
        let ok = clocks.len() == 1 && clocks[0].1.abs().is_one();
        if !ok {
            problems.push(format!(
                "{what}: atom `{a}` is not of the form `clock ~ parametric term`"
            ));
        }
    }
}

/// Incremental construction with validation at the end.
#[derive(Debug, Clone, Default)]
pub struct PtaBuilder {
    clocks: Vec<Var>,
    params: Vec<Var>,
    locations: Vec<(String, Option<ConvexConstraint>)>,
    initial: Option<String>,
    accepting: Vec<String>,
    edges: Vec<(String, String, String, Option<ConvexConstraint>, Vec<String>)>,
    bounds: Vec<(String, Rational, Rational)>,
}

impl PtaBuilder {
    pub fn new<S: AsRef<str>>(clocks: &[S], params: &[S]) -> Self {
        PtaBuilder {
            clocks: clocks.iter().map(Var::clock).collect(),
            params: params.iter().map(Var::param).collect(),
            ..Default::default()
        }
    }

    pub fn context(&self) -> Vec<Var> {
        self.clocks.iter().chain(self.params.iter()).cloned().collect()
    }

    pub fn location(&mut self, name: &str, invariant: Option<ConvexConstraint>) -> &mut Self {
        self.locations.push((name.to_string(), invariant));
        self
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.initial = Some(name.to_string());
        self
    }

    pub fn accepting(&mut self, name: &str) -> &mut Self {
        self.accepting.push(name.to_string());
        self
    }

    pub fn edge(
        &mut self,
        source: &str,
        target: &str,
        action: &str,
        guard: Option<ConvexConstraint>,
        resets: &[&str],
    ) -> &mut Self {
        self.edges.push((
            source.to_string(),
            target.to_string(),
            action.to_string(),
            guard,
            resets.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    pub fn bound(&mut self, param: &str, lo: Rational, hi: Rational) -> &mut Self {
        self.bounds.push((param.to_string(), lo, hi));
        self
    }

    pub fn build(&self) -> Result<Pta, PtaError> {
        let mut problems = Vec::new();
        let context = self.context();
        let mut names = BTreeSet::new();
        for v in &context {
            if !names.insert(v.name().to_string()) {
                problems.push(format!("variable `{}` declared twice", v.name()));
            }
        }
        let mut locations = Vec::new();
        let mut invariants = Vec::new();
        for (name, inv) in &self.locations {
            if locations.contains(name) {
                problems.push(format!("location `{name}` declared twice"));
                continue;
            }
            let inv = inv
                .clone()
                .unwrap_or_else(|| ConvexConstraint::truth(context.clone()));
            if inv.context() != context.as_slice() {
                problems.push(format!("invariant of `{name}` uses a different variable context"));
            }
            check_guard_shape(&inv, &format!("invariant of `{name}`"), &mut problems);
            locations.push(name.clone());
            invariants.push(inv);
        }
        if locations.is_empty() {
            problems.push("no locations declared".to_string());
        }
        let index = |n: &str| locations.iter().position(|l| l == n);
        let initial = match &self.initial {
            None => {
                problems.push("no initial location declared".to_string());
                0
            }
            Some(n) => index(n).unwrap_or_else(|| {
                problems.push(format!("initial location `{n}` is not declared"));
                0
            }),
        };
        let mut accepting = BTreeSet::new();
        for n in &self.accepting {
            match index(n) {
                Some(i) => {
                    accepting.insert(i);
                }
                None => problems.push(format!("accepting location `{n}` is not declared")),
            }
        }
        let mut edges = Vec::new();
        for (k, (src, tgt, action, guard, resets)) in self.edges.iter().enumerate() {
            let what = format!("edge {} ({src} -> {tgt})", k + 1);
            let s = index(src);
            let t = index(tgt);
            if s.is_none() {
                problems.push(format!("{what}: unknown source location `{src}`"));
            }
            if t.is_none() {
                problems.push(format!("{what}: unknown target location `{tgt}`"));
            }
            let guard = guard
                .clone()
                .unwrap_or_else(|| ConvexConstraint::truth(context.clone()));
            if guard.context() != context.as_slice() {
                problems.push(format!("{what}: guard uses a different variable context"));
            }
            check_guard_shape(&guard, &what, &mut problems);
            let mut rs = Vec::new();
            for r in resets {
                match self.clocks.iter().find(|c| c.name() == r) {
                    Some(c) => {
                        if !rs.contains(c) {
                            rs.push(c.clone());
                        }
                    }
                    None => problems.push(format!("{what}: reset of undeclared clock `{r}`")),
                }
            }
            if let (Some(s), Some(t)) = (s, t) {
                edges.push(Edge {
                    source: s,
                    target: t,
                    action: action.clone(),
                    guard,
                    resets: rs,
                });
            }
        }
        let mut bounds = BTreeMap::new();
        for (p, lo, hi) in &self.bounds {
            if !self.params.iter().any(|v| v.name() == p) {
                problems.push(format!("bound on undeclared parameter `{p}`"));
            } else if lo.is_negative() || lo > hi {
                problems.push(format!("bound on `{p}` is not a non-negative interval"));
            } else {
                bounds.insert(p.clone(), (lo.clone(), hi.clone()));
            }
        }
        if !problems.is_empty() {
            return Err(PtaError::Invalid(problems));
        }
        Ok(Pta {
            clocks: self.clocks.clone(),
            params: self.params.clone(),
            locations,
            initial,
            accepting,
            invariants,
            edges,
            bounds,
        })
    }
}

/// Parameter-domain atoms: `p >= 0` and any declared interval.
pub(crate) fn domain_atoms(pta: &Pta) -> Vec<AtomicConstraint> {
    use crate::constraint::Rel;
    let mut out = Vec::new();
    for p in &pta.params {
        out.push(AtomicConstraint::var_cmp(p.clone(), Rel::Ge, Rational::from_integer(0.into())));
        if let Some((lo, hi)) = pta.bounds.get(p.name()) {
            out.push(AtomicConstraint::var_cmp(p.clone(), Rel::Ge, lo.clone()));
            out.push(AtomicConstraint::var_cmp(p.clone(), Rel::Le, hi.clone()));
        }
    }
    out
}
