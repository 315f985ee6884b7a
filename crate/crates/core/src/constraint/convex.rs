use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::atom::{AtomicConstraint, Rel};
use super::fm::System;
use super::rational::Rational;
use super::term::LinearTerm;
use super::valuation::Valuation;
use super::var::Var;
use super::ConstraintError;

pub use super::fm::Bound;

/// Name of the auxiliary delay variable introduced by time elapsing.
pub const DELAY_VAR: &str = "@delay";

/// A conjunction of linear atoms over an ordered variable context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvexConstraint {
    context: Vec<Var>,
    atoms: Vec<AtomicConstraint>,
}

/// Outcome of an integer-point search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegerPoint {
    Yes(Valuation),
    No,
    Unknown,
}

impl ConvexConstraint {
    pub fn new(context: Vec<Var>, atoms: Vec<AtomicConstraint>) -> Result<Self, ConstraintError> {
        for a in &atoms {
            for v in a.term.vars() {
                if !context.contains(v) {
                    return Err(ConstraintError::UnknownVariable(v.name().to_string()));
                }
            }
        }
        Ok(ConvexConstraint { context, atoms })
    }

    pub fn truth(context: Vec<Var>) -> Self {
        ConvexConstraint {
            context,
            atoms: Vec::new(),
        }
    }

    pub fn falsum(context: Vec<Var>) -> Self {
        ConvexConstraint {
            context,
            atoms: vec![AtomicConstraint::falsum()],
        }
    }

    fn from_system(context: Vec<Var>, sys: &System) -> Self {
        ConvexConstraint {
            context,
            atoms: sys.to_atoms(),
        }
    }

    pub(crate) fn system(&self) -> System {
        System::from_atoms(&self.atoms)
    }

    pub fn context(&self) -> &[Var] {
        &self.context
    }

    pub fn atoms(&self) -> &[AtomicConstraint] {
        &self.atoms
    }

    pub fn var(&self, name: &str) -> Option<&Var> {
        self.context.iter().find(|v| v.name() == name)
    }

    pub fn is_trivially_true(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn satisfies(&self, val: &Valuation) -> Result<bool, ConstraintError> {
        for v in &self.context {
            if !val.contains(v.name()) {
                return Err(ConstraintError::MissingVariable(v.name().to_string()));
            }
        }
        Ok(self
            .atoms
            .iter()
            .all(|a| a.eval_with(|v| val.get(v.name())).unwrap_or(false)))
    }

    pub fn conjoin(&self, other: &ConvexConstraint) -> Result<Self, ConstraintError> {
        if !same_context(&self.context, &other.context) {
            return Err(ConstraintError::ContextMismatch);
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Ok(ConvexConstraint {
            context: self.context.clone(),
            atoms,
        })
    }

    pub fn with_atom(&self, atom: AtomicConstraint) -> Result<Self, ConstraintError> {
        let mut atoms = self.atoms.clone();
        atoms.push(atom);
        ConvexConstraint::new(self.context.clone(), atoms)
    }

    pub fn with_atoms(
        &self,
        extra: impl IntoIterator<Item = AtomicConstraint>,
    ) -> Result<Self, ConstraintError> {
        let mut atoms = self.atoms.clone();
        atoms.extend(extra);
        ConvexConstraint::new(self.context.clone(), atoms)
    }

    /// Same atoms over a larger (or reordered) context.
    pub fn extend_context(&self, context: Vec<Var>) -> Result<Self, ConstraintError> {
        ConvexConstraint::new(context, self.atoms.clone())
    }

    pub fn is_satisfiable(&self) -> bool {
        self.system().is_satisfiable()
    }

    /// Exact projection: `vars` are removed from the context.
    pub fn eliminate(&self, vars: &[Var]) -> ConvexConstraint {
        let sys = self.system().eliminate_all(vars);
        let context = self
            .context
            .iter()
            .filter(|v| !vars.contains(v))
            .cloned()
            .collect();
        ConvexConstraint::from_system(context, &sys)
    }

    pub fn project_onto(&self, keep: &[Var]) -> ConvexConstraint {
        let drop: Vec<Var> = self
            .context
            .iter()
            .filter(|v| !keep.contains(v))
            .cloned()
            .collect();
        self.eliminate(&drop)
    }

    /// Eliminates every clock and auxiliary variable.
    pub fn project_params(&self) -> ConvexConstraint {
        let keep: Vec<Var> = self.context.iter().filter(|v| v.is_param()).cloned().collect();
        self.project_onto(&keep)
    }

    /// Normalized atoms: duplicates merged, tightest parallel bounds kept.
    pub fn simplify(&self) -> ConvexConstraint {
        ConvexConstraint::from_system(self.context.clone(), &self.system())
    }

    /// Lets every clock in `clocks` advance by the same arbitrary delay.
    pub fn time_elapse(&self, clocks: &[Var]) -> ConvexConstraint {
        let d = Var::aux(DELAY_VAR);
        let mut atoms: Vec<AtomicConstraint> = self
            .atoms
            .iter()
            .map(|a| {
                let mut term = a.term.clone();
                for x in clocks {
                    let shifted = LinearTerm::var(x.clone()).with(d.clone(), -1);
                    term = term.substitute_term(x, &shifted);
                }
                AtomicConstraint::new(term, a.rel)
            })
            .collect();
        atoms.push(AtomicConstraint::var_cmp(d.clone(), Rel::Ge, Rational::zero()));
        let sys = System::from_atoms(&atoms).eliminate_all(std::slice::from_ref(&d));
        ConvexConstraint::from_system(self.context.clone(), &sys)
    }

    /// Existentially quantifies `r` and then sets each of them to 0.
    pub fn reset(&self, r: &[Var]) -> ConvexConstraint {
        if r.is_empty() {
            return self.clone();
        }
        let mut sys = self.system().eliminate_all(r);
        for x in r {
            let mut k = BTreeMap::new();
            k.insert(x.clone(), BigInt::one());
            sys.add_eq(k, Rational::zero());
        }
        ConvexConstraint::from_system(self.context.clone(), &sys)
    }

    /// Replaces the assigned variables by their values and drops them from the context.
    pub fn substitute(&self, val: &Valuation) -> ConvexConstraint {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let mut term = a.term.clone();
                for v in &self.context {
                    if let Some(x) = val.get(v.name()) {
                        term = term.substitute_value(v, x);
                    }
                }
                AtomicConstraint::new(term, a.rel)
            })
            .collect();
        let context = self
            .context
            .iter()
            .filter(|v| !val.contains(v.name()))
            .cloned()
            .collect();
        ConvexConstraint { context, atoms }
    }

    /// Lower and upper bound of `v` over the constraint; `None` if unsatisfiable.
    pub fn bounds(&self, v: &Var) -> Option<(Bound, Bound)> {
        let p = self.project_onto(std::slice::from_ref(v));
        let sys = p.system();
        if sys.infeasible {
            return None;
        }
        sys.bounds_given(v, &BTreeMap::new())
    }

    pub fn find_point(&self) -> Option<Valuation> {
        let pt = self.system().find_point()?;
        let mut val = Valuation::new();
        for v in &self.context {
            let x = pt.get(v).cloned().unwrap_or_else(Rational::zero);
            val.set(v.name(), x);
        }
        Some(val)
    }

    /// Point-set inclusion `self ⊆ other`, tested atom by atom.
    pub fn is_subset_of(&self, other: &ConvexConstraint) -> bool {
        let base = self.system();
        if base.infeasible || !base.is_satisfiable() {
            return true;
        }
        other.atoms.iter().all(|a| {
            a.negated().iter().all(|n| {
                let mut s = base.clone();
                s.add_atom(n);
                !s.is_satisfiable()
            })
        })
    }

    pub fn equivalent(&self, other: &ConvexConstraint) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Drops atoms implied by the remaining ones.
    pub fn remove_redundant(&self) -> ConvexConstraint {
        let simplified = self.simplify();
        if !simplified.is_satisfiable() {
            return ConvexConstraint::falsum(self.context.clone());
        }
        let mut atoms = simplified.atoms.clone();
        let mut i = 0;
        while i < atoms.len() {
            let rest: Vec<AtomicConstraint> = atoms
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, a)| a.clone())
                .collect();
            let base = System::from_atoms(&rest);
            let implied = atoms[i].negated().iter().all(|n| {
                let mut s = base.clone();
                s.add_atom(n);
                !s.is_satisfiable()
            });
            if implied {
                atoms.remove(i);
            } else {
                i += 1;
            }
        }
        ConvexConstraint {
            context: self.context.clone(),
            atoms,
        }
    }

    /// Searches for a point with non-negative integer coordinates inside
    /// `[0, search_bound]` for every context variable.
    pub fn has_integer_point(&self, search_bound: u64) -> IntegerPoint {
        if !self.is_satisfiable() {
            return IntegerPoint::No;
        }
        let bound = Rational::from_integer(BigInt::from(search_bound));
        for v in &self.context {
            match self.bounds(v) {
                None => return IntegerPoint::No,
                Some((lo, hi)) => {
                    if integer_range(&lo, &hi, None).is_none() {
                        return IntegerPoint::No;
                    }
                }
            }
        }
        let mut truncated = false;
        let mut assigned = Valuation::new();
        if self.int_dfs(0, &bound, &mut assigned, &mut truncated) {
            return IntegerPoint::Yes(assigned);
        }
        if truncated {
            IntegerPoint::Unknown
        } else {
            IntegerPoint::No
        }
    }

    fn int_dfs(
        &self,
        depth: usize,
        bound: &Rational,
        assigned: &mut Valuation,
        truncated: &mut bool,
    ) -> bool {
        if depth == self.context.len() {
            return self.satisfies(assigned).unwrap_or(false);
        }
        let v = self.context[depth].clone();
        let rest = self.substitute(assigned);
        let Some((lo, hi)) = rest.bounds(&v) else {
            return false;
        };
        let Some((first, last)) = integer_range(&lo, &hi, Some(bound)) else {
            if exceeds(&hi, bound) {
                *truncated = true;
            }
            return false;
        };
        if exceeds(&hi, bound) {
            *truncated = true;
        }
        let mut k = first;
        while k <= last {
            assigned.set(v.name(), Rational::from_integer(k.clone()));
            if self.int_dfs(depth + 1, bound, assigned, truncated) {
                return true;
            }
            k += 1;
        }
        assigned.remove(v.name());
        false
    }
}

/// Integers in the interval intersected with `[0, cap]`.
fn integer_range(lo: &Bound, hi: &Bound, cap: Option<&Rational>) -> Option<(BigInt, BigInt)> {
    let first = match lo {
        Bound::Unbounded => BigInt::zero(),
        Bound::At(a, strict) => {
            let f = if *strict && a.is_integer() {
                a.to_integer() + 1
            } else {
                a.ceil().to_integer()
            };
            f.max(BigInt::zero())
        }
    };
    let last = match (hi, cap) {
        (Bound::Unbounded, None) => return Some((first.clone(), first)),
        (Bound::Unbounded, Some(c)) => c.floor().to_integer(),
        (Bound::At(b, strict), cap) => {
            let l = if *strict && b.is_integer() {
                b.to_integer() - 1
            } else {
                b.floor().to_integer()
            };
            match cap {
                Some(c) => l.min(c.floor().to_integer()),
                None => l,
            }
        }
    };
    if last.is_negative() || first > last {
        None
    } else {
        Some((first, last))
    }
}

fn exceeds(hi: &Bound, bound: &Rational) -> bool {
    match hi {
        Bound::Unbounded => true,
        Bound::At(b, _) => b > bound,
    }
}

pub(crate) fn same_context(a: &[Var], b: &[Var]) -> bool {
    a.len() == b.len() && a.iter().all(|v| b.contains(v))
}

impl fmt::Display for ConvexConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("true");
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" && ")?;
            }
            if a.is_ground() {
                let holds = a.eval_with(|_| None).unwrap_or(false);
                f.write_str(if holds { "true" } else { "false" })?;
            } else {
                write!(f, "{}", a)?;
            }
        }
        Ok(())
    }
}
