use std::fmt;

use super::atom::AtomicConstraint;
use super::convex::{same_context, ConvexConstraint};
use super::valuation::Valuation;
use super::var::Var;
use super::ConstraintError;

/// A finite union of convex constraints over one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    context: Vec<Var>,
    disjuncts: Vec<ConvexConstraint>,
}

impl ConstraintSet {
    pub fn empty(context: Vec<Var>) -> Self {
        ConstraintSet {
            context,
            disjuncts: Vec::new(),
        }
    }

    pub fn universe(context: Vec<Var>) -> Self {
        let t = ConvexConstraint::truth(context.clone());
        ConstraintSet {
            context,
            disjuncts: vec![t],
        }
    }

    pub fn from_convex(c: ConvexConstraint) -> Self {
        let mut s = ConstraintSet::empty(c.context().to_vec());
        s.push_unchecked(c);
        s
    }

    pub fn from_disjuncts(
        context: Vec<Var>,
        disjuncts: Vec<ConvexConstraint>,
    ) -> Result<Self, ConstraintError> {
        let mut s = ConstraintSet::empty(context);
        for d in disjuncts {
            s.push(d)?;
        }
        Ok(s)
    }

    pub fn context(&self) -> &[Var] {
        &self.context
    }

    pub fn disjuncts(&self) -> &[ConvexConstraint] {
        &self.disjuncts
    }

    pub fn is_empty(&self) -> bool {
        self.disjuncts.is_empty()
    }

    /// Adds a disjunct; unsatisfiable ones are dropped.
    pub fn push(&mut self, c: ConvexConstraint) -> Result<(), ConstraintError> {
        if !same_context(&self.context, c.context()) {
            return Err(ConstraintError::ContextMismatch);
        }
        self.push_unchecked(c);
        Ok(())
    }

    fn push_unchecked(&mut self, c: ConvexConstraint) {
        if c.is_satisfiable() {
            self.disjuncts.push(c.simplify());
        }
    }

    /// Adds a disjunct, absorbing it into (or letting it absorb) existing ones.
    pub fn union_absorbing(&mut self, c: ConvexConstraint) -> Result<(), ConstraintError> {
        if !same_context(&self.context, c.context()) {
            return Err(ConstraintError::ContextMismatch);
        }
        if !c.is_satisfiable() {
            return Ok(());
        }
        let c = c.simplify();
        if self.disjuncts.iter().any(|d| c.is_subset_of(d)) {
            return Ok(());
        }
        self.disjuncts.retain(|d| !d.is_subset_of(&c));
        self.disjuncts.push(c);
        Ok(())
    }

    pub fn union(&self, other: &ConstraintSet) -> Result<ConstraintSet, ConstraintError> {
        let mut out = self.clone();
        for d in &other.disjuncts {
            out.union_absorbing(d.clone())?;
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &ConstraintSet) -> Result<ConstraintSet, ConstraintError> {
        if !same_context(&self.context, &other.context) {
            return Err(ConstraintError::ContextMismatch);
        }
        let mut out = ConstraintSet::empty(self.context.clone());
        for a in &self.disjuncts {
            for b in &other.disjuncts {
                out.union_absorbing(a.conjoin(b)?)?;
            }
        }
        Ok(out)
    }

    pub fn intersect_convex(&self, c: &ConvexConstraint) -> Result<ConstraintSet, ConstraintError> {
        self.intersection(&ConstraintSet::from_convex(c.clone()))
    }

    pub fn contains_point(&self, val: &Valuation) -> Result<bool, ConstraintError> {
        for d in &self.disjuncts {
            if d.satisfies(val)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `self ⊇ other` as point sets.
    pub fn contains(&self, other: &ConstraintSet) -> Result<bool, ConstraintError> {
        if !same_context(&self.context, &other.context) {
            return Err(ConstraintError::ContextMismatch);
        }
        Ok(other
            .disjuncts
            .iter()
            .all(|d| difference_is_empty(d, &self.disjuncts)))
    }

    pub fn equivalent(&self, other: &ConstraintSet) -> Result<bool, ConstraintError> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    /// Projects every disjunct, removing `vars` from the context.
    pub fn eliminate(&self, vars: &[Var]) -> ConstraintSet {
        let context: Vec<Var> = self
            .context
            .iter()
            .filter(|v| !vars.contains(v))
            .cloned()
            .collect();
        let mut out = ConstraintSet::empty(context);
        for d in &self.disjuncts {
            let _ = out.union_absorbing(d.eliminate(vars));
        }
        out
    }

    pub fn project_onto(&self, keep: &[Var]) -> ConstraintSet {
        let drop: Vec<Var> = self
            .context
            .iter()
            .filter(|v| !keep.contains(v))
            .cloned()
            .collect();
        self.eliminate(&drop)
    }

    /// Redundancy-free disjuncts, for presentation.
    pub fn simplified(&self) -> ConstraintSet {
        ConstraintSet {
            context: self.context.clone(),
            disjuncts: self.disjuncts.iter().map(|d| d.remove_redundant()).collect(),
        }
    }
}

/// Whether `d \ (a₁ ∪ … ∪ aₖ)` is empty, by splitting `d` along negated atoms.
fn difference_is_empty(d: &ConvexConstraint, cover: &[ConvexConstraint]) -> bool {
    if !d.is_satisfiable() {
        return true;
    }
    let Some((first, rest)) = cover.split_first() else {
        return false;
    };
    if d.is_subset_of(first) {
        return true;
    }
    // Pieces d ∧ α₁ ∧ … ∧ αᵢ₋₁ ∧ ¬αᵢ partition d \ first.
    let mut prefix: Vec<AtomicConstraint> = Vec::new();
    for atom in first.atoms() {
        for neg in atom.negated() {
            let mut extra = prefix.clone();
            extra.push(neg);
            let piece = match d.with_atoms(extra) {
                Ok(p) => p,
                Err(_) => return false,
            };
            if !difference_is_empty(&piece, rest) {
                return false;
            }
        }
        prefix.push(atom.clone());
    }
    true
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.disjuncts.is_empty() {
            return f.write_str("false");
        }
        if self.disjuncts.len() == 1 {
            return write!(f, "{}", self.disjuncts[0]);
        }
        for (i, d) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" || ")?;
            }
            write!(f, "({})", d)?;
        }
        Ok(())
    }
}
