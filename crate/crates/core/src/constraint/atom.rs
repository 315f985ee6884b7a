use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rational::{render, Rational};
use super::term::{write_sum, LinearTerm};
use super::var::Var;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Rel> {
        Some(match s {
            "<" => Rel::Lt,
            "<=" => Rel::Le,
            "=" | "==" => Rel::Eq,
            ">=" => Rel::Ge,
            ">" => Rel::Gt,
            _ => return None,
        })
    }

    /// Relation obtained after multiplying both sides by -1.
    pub fn flipped(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Eq => Rel::Eq,
            Rel::Ge => Rel::Le,
            Rel::Gt => Rel::Lt,
        }
    }

    pub fn holds(self, value: &Rational) -> bool {
        match self {
            Rel::Lt => value.is_negative(),
            Rel::Le => !value.is_positive(),
            Rel::Eq => value.is_zero(),
            Rel::Ge => !value.is_negative(),
            Rel::Gt => value.is_positive(),
        }
    }
}

/// `term ⋈ 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicConstraint {
    pub term: LinearTerm,
    pub rel: Rel,
}

impl AtomicConstraint {
    pub fn new(term: LinearTerm, rel: Rel) -> Self {
        AtomicConstraint { term, rel }
    }

    /// `lhs ⋈ rhs`, moved into `lhs - rhs ⋈ 0`.
    pub fn compare(lhs: LinearTerm, rel: Rel, rhs: LinearTerm) -> Self {
        AtomicConstraint::new(lhs.sub(&rhs), rel)
    }

    /// `v ⋈ c`.
    pub fn var_cmp(v: Var, rel: Rel, c: Rational) -> Self {
        AtomicConstraint::new(LinearTerm::var(v).with_constant(-c), rel)
    }

    pub fn falsum() -> Self {
        AtomicConstraint::new(LinearTerm::constant(Rational::from_integer(1.into())), Rel::Le)
    }

    pub fn is_ground(&self) -> bool {
        self.term.is_ground()
    }

    pub fn eval_with<'a, F>(&self, lookup: F) -> Option<bool>
    where
        F: FnMut(&Var) -> Option<&'a Rational>,
    {
        self.term.eval_with(lookup).map(|v| self.rel.holds(&v))
    }

    /// The disjuncts of the negation (two for an equality).
    pub fn negated(&self) -> Vec<AtomicConstraint> {
        let t = self.term.clone();
        match self.rel {
            Rel::Lt => vec![AtomicConstraint::new(t, Rel::Ge)],
            Rel::Le => vec![AtomicConstraint::new(t, Rel::Gt)],
            Rel::Ge => vec![AtomicConstraint::new(t, Rel::Lt)],
            Rel::Gt => vec![AtomicConstraint::new(t, Rel::Le)],
            Rel::Eq => vec![
                AtomicConstraint::new(t.clone(), Rel::Lt),
                AtomicConstraint::new(t, Rel::Gt),
            ],
        }
    }
}

impl fmt::Display for AtomicConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut term = self.term.clone();
        let mut rel = self.rel;
        if term.is_ground() {
            return write!(f, "{} {} 0", render(term.constant_part()), rel.symbol());
        }
        if !term.coeffs().values().any(|c| c.is_positive()) {
            term = term.neg();
            rel = rel.flipped();
        }
        let left: Vec<(Var, BigInt)> = term
            .coeffs()
            .iter()
            .filter(|(_, c)| c.is_positive())
            .map(|(v, c)| (v.clone(), c.clone()))
            .collect();
        let right: Vec<(Var, BigInt)> = term
            .coeffs()
            .iter()
            .filter(|(_, c)| c.is_negative())
            .map(|(v, c)| (v.clone(), -c))
            .collect();
        let k = -term.constant_part().clone();
        write_sum(f, &left)?;
        write!(f, " {} ", rel.symbol())?;
        if right.is_empty() {
            f.write_str(&render(&k))
        } else {
            write_sum(f, &right)?;
            if k.is_positive() {
                write!(f, " + {}", render(&k))
            } else if k.is_negative() {
                write!(f, " - {}", render(&-k))
            } else {
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::rational::int;

    #[test]
    fn display_moves_negative_side_right() {
        let p1 = Var::param("p1");
        let p2 = Var::param("p2");
        let a = AtomicConstraint::new(
            LinearTerm::zero().with(p1, 2).with(p2, -1),
            Rel::Le,
        );
        assert_eq!(a.to_string(), "2*p1 <= p2");
    }

    #[test]
    fn display_flips_all_negative_terms() {
        let x = Var::clock("x");
        let a = AtomicConstraint::new(LinearTerm::var(x).neg().with_constant(int(3)), Rel::Le);
        assert_eq!(a.to_string(), "x >= 3");
    }

    #[test]
    fn equality_negates_into_two_strict_atoms() {
        let x = Var::clock("x");
        let a = AtomicConstraint::var_cmp(x, Rel::Eq, int(1));
        let n = a.negated();
        assert_eq!(n.len(), 2);
        assert!(n.iter().all(|b| matches!(b.rel, Rel::Lt | Rel::Gt)));
    }
}
