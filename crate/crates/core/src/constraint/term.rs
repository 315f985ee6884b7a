use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{render, Rational};
use super::var::Var;

/// `Σ coeff·var + constant` with integer coefficients and a rational constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinearTerm {
    coeffs: BTreeMap<Var, BigInt>,
    constant: Rational,
}

impl LinearTerm {
    pub fn zero() -> Self {
        LinearTerm::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinearTerm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: Var) -> Self {
        LinearTerm::zero().with(v, BigInt::one())
    }

    /// Builder-style add of `coeff·v`.
    pub fn with(mut self, v: Var, coeff: impl Into<BigInt>) -> Self {
        self.add_coeff(v, coeff.into());
        self
    }

    pub fn with_constant(mut self, c: Rational) -> Self {
        self.constant += c;
        self
    }

    pub fn add_coeff(&mut self, v: Var, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v.clone()).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    /// `Σ k·v + c` with rational `k`, multiplied by the (positive) lcm of the
    /// coefficient denominators so the coefficients become integers.
    pub fn from_rational(coeffs: impl IntoIterator<Item = (Var, Rational)>, constant: Rational) -> Self {
        let coeffs: Vec<(Var, Rational)> = coeffs.into_iter().collect();
        let mut l = BigInt::one();
        for (_, k) in &coeffs {
            l = l.lcm(k.denom());
        }
        let scale = Rational::from_integer(l);
        let mut term = LinearTerm::constant(constant * &scale);
        for (v, k) in coeffs {
            term.add_coeff(v, (k * &scale).to_integer());
        }
        term
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, BigInt> {
        &self.coeffs
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, v: &Var) -> BigInt {
        self.coeffs.get(v).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.coeffs.keys()
    }

    pub fn mentions(&self, v: &Var) -> bool {
        self.coeffs.contains_key(v)
    }

    pub fn neg(&self) -> Self {
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), -c)).collect(),
            constant: -self.constant.clone(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return LinearTerm::zero();
        }
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
            constant: &self.constant * Rational::from_integer(k.clone()),
        }
    }

    pub fn add(&self, other: &LinearTerm) -> Self {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            out.add_coeff(v.clone(), c.clone());
        }
        out.constant += &other.constant;
        out
    }

    pub fn sub(&self, other: &LinearTerm) -> Self {
        self.add(&other.neg())
    }

    /// Replaces `v` by `value`, folding the product into the constant.
    pub fn substitute_value(&self, v: &Var, value: &Rational) -> Self {
        let mut out = self.clone();
        if let Some(c) = out.coeffs.remove(v) {
            out.constant += Rational::from_integer(c) * value;
        }
        out
    }

    /// Replaces `v` by the linear term `by` (coefficients must stay integral,
    /// which holds because `by` has integer coefficients).
    pub fn substitute_term(&self, v: &Var, by: &LinearTerm) -> Self {
        match self.coeffs.get(v) {
            None => self.clone(),
            Some(c) => {
                let c = c.clone();
                let mut out = self.clone();
                out.coeffs.remove(v);
                out.add(&by.scale(&c))
            }
        }
    }

    /// Evaluates under a lookup; `None` if some variable is unassigned.
    pub fn eval_with<'a, F>(&self, mut lookup: F) -> Option<Rational>
    where
        F: FnMut(&Var) -> Option<&'a Rational>,
    {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            let value = lookup(v)?;
            acc += Rational::from_integer(c.clone()) * value;
        }
        Some(acc)
    }

    pub(crate) fn into_parts(self) -> (BTreeMap<Var, BigInt>, Rational) {
        (self.coeffs, self.constant)
    }

    pub(crate) fn from_parts(coeffs: BTreeMap<Var, BigInt>, constant: Rational) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        LinearTerm { coeffs, constant }
    }
}

/// Writes `Σ coeff·var` (no constant) using `+`/`-` and `k*v`.
pub(crate) fn write_sum(f: &mut impl fmt::Write, parts: &[(Var, BigInt)]) -> fmt::Result {
    for (i, (v, c)) in parts.iter().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else if c.is_negative() {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        if mag.is_one() {
            write!(f, "{}", v)?;
        } else {
            write!(f, "{}*{}", mag, v)?;
        }
    }
    Ok(())
}

impl fmt::Display for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<(Var, BigInt)> = self
            .coeffs
            .iter()
            .map(|(v, c)| (v.clone(), c.clone()))
            .collect();
        if parts.is_empty() {
            return f.write_str(&render(&self.constant));
        }
        write_sum(f, &parts)?;
        if self.constant.is_positive() {
            write!(f, " + {}", render(&self.constant))?;
        } else if self.constant.is_negative() {
            write!(f, " - {}", render(&-self.constant.clone()))?;
        }
        Ok(())
    }
}
