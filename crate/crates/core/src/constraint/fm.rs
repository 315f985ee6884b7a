//! Normalized linear systems and Fourier–Motzkin elimination.
//!
//! Rows are kept as `Σ aᵢ·vᵢ + c ⋈ 0` with `⋈ ∈ {=, ≤, <}` and primitive
//! integer coefficient vectors. Parallel inequalities collapse to the
//! tightest one, opposite non-strict pairs with matching bounds become an
//! equality, and contradictions are detected eagerly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::atom::{AtomicConstraint, Rel};
use super::rational::Rational;
use super::term::LinearTerm;
use super::var::Var;

pub(crate) type Coeffs = BTreeMap<Var, BigInt>;

#[derive(Debug, Clone, Default)]
pub(crate) struct System {
    /// `coeffs + c = 0`, first coefficient positive.
    pub eqs: BTreeMap<Coeffs, Rational>,
    /// `coeffs + c ≤ 0` (or `< 0` when the flag is set).
    pub ineqs: BTreeMap<Coeffs, (Rational, bool)>,
    pub infeasible: bool,
}

fn neg_coeffs(c: &Coeffs) -> Coeffs {
    c.iter().map(|(v, k)| (v.clone(), -k)).collect()
}

/// Divides by the gcd of the coefficients; returns the scaled constant.
fn primitive(coeffs: Coeffs, constant: Rational) -> (Coeffs, Rational) {
    use num_integer::Integer;
    let mut g = BigInt::zero();
    for c in coeffs.values() {
        g = g.gcd(c);
    }
    if g.is_zero() || g.is_one() {
        return (coeffs, constant);
    }
    let divided = coeffs.into_iter().map(|(v, c)| (v, c / &g)).collect();
    (divided, constant / Rational::from_integer(g))
}

impl System {
    pub fn from_atoms<'a>(atoms: impl IntoIterator<Item = &'a AtomicConstraint>) -> Self {
        let mut s = System::default();
        for a in atoms {
            s.add_atom(a);
            if s.infeasible {
                break;
            }
        }
        s
    }

    pub fn add_atom(&mut self, a: &AtomicConstraint) {
        let (coeffs, c) = a.term.clone().into_parts();
        match a.rel {
            Rel::Eq => self.add_eq(coeffs, c),
            Rel::Le => self.add_ineq(coeffs, c, false),
            Rel::Lt => self.add_ineq(coeffs, c, true),
            Rel::Ge => self.add_ineq(neg_coeffs(&coeffs), -c, false),
            Rel::Gt => self.add_ineq(neg_coeffs(&coeffs), -c, true),
        }
    }

    pub fn add_eq(&mut self, coeffs: Coeffs, c: Rational) {
        if self.infeasible {
            return;
        }
        let coeffs: Coeffs = coeffs.into_iter().filter(|(_, k)| !k.is_zero()).collect();
        if coeffs.is_empty() {
            if !c.is_zero() {
                self.infeasible = true;
            }
            return;
        }
        let (mut coeffs, mut c) = primitive(coeffs, c);
        if coeffs.values().next().map_or(false, |k| k.is_negative()) {
            coeffs = neg_coeffs(&coeffs);
            c = -c;
        }
        if let Some(old) = self.eqs.get(&coeffs) {
            if *old != c {
                self.infeasible = true;
            }
            return;
        }
        // An existing inequality on the same direction is either implied or contradicted.
        let neg = neg_coeffs(&coeffs);
        if let Some((ci, strict)) = self.ineqs.remove(&coeffs) {
            // coeffs = -c, so coeffs + ci = ci - c
            let v = &ci - &c;
            if v.is_positive() || (strict && v.is_zero()) {
                self.infeasible = true;
                return;
            }
        }
        if let Some((ci, strict)) = self.ineqs.remove(&neg) {
            // -coeffs = c
            let v = &ci + &c;
            if v.is_positive() || (strict && v.is_zero()) {
                self.infeasible = true;
                return;
            }
        }
        self.eqs.insert(coeffs, c);
    }

    pub fn add_ineq(&mut self, coeffs: Coeffs, c: Rational, strict: bool) {
        if self.infeasible {
            return;
        }
        let coeffs: Coeffs = coeffs.into_iter().filter(|(_, k)| !k.is_zero()).collect();
        if coeffs.is_empty() {
            if c.is_positive() || (strict && c.is_zero()) {
                self.infeasible = true;
            }
            return;
        }
        let (coeffs, c) = primitive(coeffs, c);
        let neg = neg_coeffs(&coeffs);
        // Check against equalities in either orientation.
        let eq_key_pos = coeffs.values().next().map_or(false, |k| k.is_positive());
        let eq_key = if eq_key_pos { &coeffs } else { &neg };
        if let Some(ce) = self.eqs.get(eq_key) {
            // eq: eq_key = -ce. Value of coeffs is -ce if eq_key_pos, else ce.
            let lhs = if eq_key_pos { -ce.clone() } else { ce.clone() };
            let v = lhs + &c;
            if v.is_positive() || (strict && v.is_zero()) {
                self.infeasible = true;
            }
            return;
        }
        // Tightest of parallel inequalities: larger constant is tighter.
        let mut c = c;
        let mut strict = strict;
        if let Some((old_c, old_strict)) = self.ineqs.get(&coeffs) {
            if *old_c > c || (*old_c == c && (*old_strict || !strict)) {
                return;
            }
            if *old_c == c {
                strict = strict || *old_strict;
            }
            c = c.max(old_c.clone());
        }
        // Opposite inequality: -coeffs + c2 ≤ 0, i.e. coeffs ≥ c2; ours is coeffs ≤ -c.
        if let Some((c2, strict2)) = self.ineqs.get(&neg).cloned() {
            let upper = -c.clone();
            if c2 > upper || (c2 == upper && (strict || strict2)) {
                self.infeasible = true;
                return;
            }
            if c2 == upper {
                self.ineqs.remove(&neg);
                self.add_eq(coeffs, c);
                return;
            }
        }
        self.ineqs.insert(coeffs, (c, strict));
    }

    pub fn mentions(&self, v: &Var) -> bool {
        self.eqs.keys().chain(self.ineqs.keys()).any(|k| k.contains_key(v))
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = self
            .eqs
            .keys()
            .chain(self.ineqs.keys())
            .flat_map(|k| k.keys().cloned())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Eliminates one variable exactly.
    pub fn eliminate(&self, v: &Var) -> System {
        if self.infeasible {
            return self.clone();
        }
        // Equality substitution when available: pick the shortest equality.
        let pivot = self
            .eqs
            .iter()
            .filter(|(k, _)| k.contains_key(v))
            .min_by_key(|(k, _)| k.len())
            .map(|(k, c)| (k.clone(), c.clone()));
        let mut out = System::default();
        if let Some((pk, pc)) = pivot {
            let a = pk[v].clone();
            let a_abs = a.abs();
            let sign = if a.is_negative() { -BigInt::one() } else { BigInt::one() };
            let combine = |k: &Coeffs, c: &Rational| -> (Coeffs, Rational) {
                let b = k.get(v).cloned().unwrap_or_else(BigInt::zero);
                if b.is_zero() {
                    return (k.clone(), c.clone());
                }
                // |a|·row − sgn(a)·b·pivot
                let f = &sign * &b;
                let mut nk: Coeffs = BTreeMap::new();
                for (var, kv) in k {
                    nk.insert(var.clone(), kv * &a_abs);
                }
                for (var, kv) in &pk {
                    let e = nk.entry(var.clone()).or_insert_with(BigInt::zero);
                    *e -= kv * &f;
                }
                nk.retain(|_, x| !x.is_zero());
                let nc = c * Rational::from_integer(a_abs.clone())
                    - &pc * Rational::from_integer(f);
                (nk, nc)
            };
            for (k, c) in &self.eqs {
                if *k == pk {
                    continue;
                }
                let (nk, nc) = combine(k, c);
                out.add_eq(nk, nc);
            }
            for (k, (c, s)) in &self.ineqs {
                let (nk, nc) = combine(k, c);
                out.add_ineq(nk, nc, *s);
            }
            return out;
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (k, c) in &self.eqs {
            out.add_eq(k.clone(), c.clone());
        }
        for (k, (c, s)) in &self.ineqs {
            match k.get(v) {
                None => out.add_ineq(k.clone(), c.clone(), *s),
                Some(a) if a.is_positive() => pos.push((k, c, *s)),
                Some(_) => neg.push((k, c, *s)),
            }
        }
        for (pk, pc, ps) in &pos {
            let a = pk[v].clone();
            for (nk, nc, ns) in &neg {
                let b = -nk[v].clone();
                let mut k: Coeffs = BTreeMap::new();
                for (var, x) in pk.iter() {
                    k.insert(var.clone(), x * &b);
                }
                for (var, x) in nk.iter() {
                    let e = k.entry(var.clone()).or_insert_with(BigInt::zero);
                    *e += x * &a;
                }
                k.retain(|_, x| !x.is_zero());
                let c = *pc * Rational::from_integer(b.clone())
                    + *nc * Rational::from_integer(a.clone());
                out.add_ineq(k, c, *ps || *ns);
                if out.infeasible {
                    return out;
                }
            }
        }
        out
    }

    /// Picks the next variable to eliminate among `candidates`.
    fn pick(&self, candidates: &[Var]) -> Option<Var> {
        let present: Vec<&Var> = candidates.iter().filter(|v| self.mentions(v)).collect();
        if present.is_empty() {
            return None;
        }
        if let Some(v) = present
            .iter()
            .find(|v| self.eqs.keys().any(|k| k.contains_key(**v)))
        {
            return Some((*v).clone());
        }
        present
            .into_iter()
            .min_by_key(|v| {
                let mut p = 0usize;
                let mut n = 0usize;
                for k in self.ineqs.keys() {
                    match k.get(*v) {
                        Some(a) if a.is_positive() => p += 1,
                        Some(_) => n += 1,
                        None => {}
                    }
                }
                p * n
            })
            .cloned()
    }

    pub fn eliminate_all(&self, vars: &[Var]) -> System {
        let mut s = self.clone();
        while !s.infeasible {
            match s.pick(vars) {
                Some(v) => s = s.eliminate(&v),
                None => break,
            }
        }
        s
    }

    pub fn is_satisfiable(&self) -> bool {
        let vars = self.vars();
        !self.eliminate_all(&vars).infeasible
    }

    /// Finds a rational point; variables not mentioned get 0.
    pub fn find_point(&self) -> Option<BTreeMap<Var, Rational>> {
        if self.infeasible {
            return None;
        }
        let mut stages: Vec<(Var, System)> = Vec::new();
        let mut s = self.clone();
        let all = s.vars();
        while let Some(v) = s.pick(&all) {
            let next = s.eliminate(&v);
            stages.push((v, s));
            s = next;
            if s.infeasible {
                return None;
            }
        }
        let mut point: BTreeMap<Var, Rational> = BTreeMap::new();
        for (v, sys) in stages.into_iter().rev() {
            let value = sys.choose_value(&v, &point)?;
            point.insert(v, value);
        }
        Some(point)
    }

    /// Bounds on `v` once every other variable is fixed by `point` (missing = 0).
    pub fn bounds_given(
        &self,
        v: &Var,
        point: &BTreeMap<Var, Rational>,
    ) -> Option<(Bound, Bound)> {
        let zero = Rational::zero();
        let eval_rest = |k: &Coeffs, c: &Rational| -> Rational {
            let mut acc = c.clone();
            for (var, x) in k {
                if var != v {
                    let val = point.get(var).unwrap_or(&zero);
                    acc += Rational::from_integer(x.clone()) * val;
                }
            }
            acc
        };
        let mut lo = Bound::Unbounded;
        let mut hi = Bound::Unbounded;
        for (k, c) in &self.eqs {
            let rest = eval_rest(k, c);
            match k.get(v) {
                None => {
                    if !rest.is_zero() {
                        return None;
                    }
                }
                Some(a) => {
                    let val = -rest / Rational::from_integer(a.clone());
                    lo = lo.tighten_lower(Bound::At(val.clone(), false));
                    hi = hi.tighten_upper(Bound::At(val, false));
                }
            }
        }
        for (k, (c, strict)) in &self.ineqs {
            let rest = eval_rest(k, c);
            match k.get(v) {
                None => {
                    if rest.is_positive() || (*strict && rest.is_zero()) {
                        return None;
                    }
                }
                Some(a) => {
                    // a·v + rest ⋈ 0
                    let val = -rest / Rational::from_integer(a.clone());
                    if a.is_positive() {
                        hi = hi.tighten_upper(Bound::At(val, *strict));
                    } else {
                        lo = lo.tighten_lower(Bound::At(val, *strict));
                    }
                }
            }
        }
        Some((lo, hi))
    }

    fn choose_value(&self, v: &Var, point: &BTreeMap<Var, Rational>) -> Option<Rational> {
        let (lo, hi) = self.bounds_given(v, point)?;
        pick_in(&lo, &hi)
    }

    pub fn to_atoms(&self) -> Vec<AtomicConstraint> {
        if self.infeasible {
            return vec![AtomicConstraint::falsum()];
        }
        let mut out = Vec::new();
        for (k, c) in &self.eqs {
            out.push(AtomicConstraint::new(to_term(k, c), Rel::Eq));
        }
        for (k, (c, s)) in &self.ineqs {
            let rel = if *s { Rel::Lt } else { Rel::Le };
            out.push(AtomicConstraint::new(to_term(k, c), rel));
        }
        out
    }
}

fn to_term(k: &Coeffs, c: &Rational) -> LinearTerm {
    LinearTerm::from_parts(k.clone(), c.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Unbounded,
    /// value, strict
    At(Rational, bool),
}

impl Bound {
    fn tighten_lower(self, other: Bound) -> Bound {
        match (&self, &other) {
            (Bound::Unbounded, _) => other,
            (_, Bound::Unbounded) => self,
            (Bound::At(a, sa), Bound::At(b, sb)) => {
                if b > a || (b == a && *sb && !*sa) {
                    other
                } else {
                    self
                }
            }
        }
    }

    fn tighten_upper(self, other: Bound) -> Bound {
        match (&self, &other) {
            (Bound::Unbounded, _) => other,
            (_, Bound::Unbounded) => self,
            (Bound::At(a, sa), Bound::At(b, sb)) => {
                if b < a || (b == a && *sb && !*sa) {
                    other
                } else {
                    self
                }
            }
        }
    }
}

/// Picks a value in the interval, preferring 0, then integers near the bounds.
pub(crate) fn pick_in(lo: &Bound, hi: &Bound) -> Option<Rational> {
    let zero = Rational::zero();
    let one = Rational::one();
    let above = |x: &Rational| match lo {
        Bound::Unbounded => true,
        Bound::At(b, s) => x > b || (!s && x == b),
    };
    let below = |x: &Rational| match hi {
        Bound::Unbounded => true,
        Bound::At(b, s) => x < b || (!s && x == b),
    };
    if above(&zero) && below(&zero) {
        return Some(zero);
    }
    let candidate = match (lo, hi) {
        (Bound::Unbounded, Bound::Unbounded) => zero,
        (Bound::At(a, s), Bound::Unbounded) => {
            if *s {
                a.floor() + one
            } else {
                a.clone()
            }
        }
        (Bound::Unbounded, Bound::At(b, s)) => {
            if *s {
                b.ceil() - one
            } else {
                b.clone()
            }
        }
        (Bound::At(a, sa), Bound::At(b, sb)) => {
            if !sa {
                a.clone()
            } else if !sb {
                b.clone()
            } else {
                (a + b) / Rational::from_integer(2.into())
            }
        }
    };
    if above(&candidate) && below(&candidate) {
        Some(candidate)
    } else {
        None
    }
}
