use num_traits::{Signed, Zero};
use proptest::prelude::*;

use paraverse_core::constraint::{
    ratio, AtomicConstraint, ConstraintSet, ConvexConstraint, LinearTerm, Rational,
    Rel, Valuation, Var,
};

pub const RELS: [Rel; 5] = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ge, Rel::Gt];

pub type RawAtom = (Vec<i64>, i64, usize);

pub fn raw_atoms(nvars: usize, max_atoms: usize, coeff: i64) -> impl Strategy<Value = Vec<RawAtom>> {
    let atom = (
        proptest::collection::vec(-coeff..=coeff, nvars),
        -6i64..=6,
        // equalities are rarer so the sets stay full-dimensional often enough
        prop_oneof![3 => Just(0usize), 3 => Just(1usize), 1 => Just(2usize), 3 => Just(3usize), 3 => Just(4usize)],
    );
    proptest::collection::vec(atom, 1..=max_atoms)
}

pub fn build(vars: &[Var], raw: &[RawAtom]) -> ConvexConstraint {
    let atoms = raw
        .iter()
        .map(|(cs, k, r)| {
            let mut t = LinearTerm::constant(Rational::from_integer((*k).into()));
            for (v, c) in vars.iter().zip(cs) {
                if *c != 0 {
                    t.add_coeff(v.clone(), (*c).into());
                }
            }
            AtomicConstraint::new(t, RELS[*r])
        })
        .collect();
    ConvexConstraint::new(vars.to_vec(), atoms).unwrap()
}

pub fn point(vars: &[Var], xs: &[i64]) -> Valuation {
    vars.iter().zip(xs).map(|(v, x)| (v.name().to_string(), ratio(*x, 2))).collect()
}

/// Whether some value of `v` satisfies every atom once the other variables
/// are fixed by `val`: intersects one-dimensional half-lines exactly.
pub fn extends(c: &ConvexConstraint, v: &Var, val: &Valuation) -> bool {
    // (bound, strict)
    let mut lo: Option<(Rational, bool)> = None;
    let mut hi: Option<(Rational, bool)> = None;
    for a in c.atoms() {
        let mut rest = a.term.constant_part().clone();
        let mut k = Rational::zero();
        for (u, coeff) in a.term.coeffs() {
            let coeff = Rational::from_integer(coeff.clone());
            if u == v {
                k = coeff;
            } else {
                rest += coeff * val.get(u.name()).unwrap();
            }
        }
        if k.is_zero() {
            if !a.rel.holds(&rest) {
                return false;
            }
            continue;
        }
        // k·v + rest ⋈ 0  ⇔  v ⋈' -rest/k
        let b = -rest / &k;
        let rel = if k.is_positive() { a.rel } else { a.rel.flipped() };
        let mut tighten_lo = |b: &Rational, strict: bool| {
            let replace = match &lo {
                None => true,
                Some((x, s)) => b > x || (b == x && strict && !s),
            };
            if replace {
                lo = Some((b.clone(), strict));
            }
        };
        match rel {
            Rel::Gt => tighten_lo(&b, true),
            Rel::Ge | Rel::Eq => tighten_lo(&b, false),
            _ => {}
        }
        let replace_hi = |hi: &mut Option<(Rational, bool)>, b: &Rational, strict: bool| {
            let replace = match hi {
                None => true,
                Some((x, s)) => b < x || (b == x && strict && !*s),
            };
            if replace {
                *hi = Some((b.clone(), strict));
            }
        };
        match rel {
            Rel::Lt => replace_hi(&mut hi, &b, true),
            Rel::Le | Rel::Eq => replace_hi(&mut hi, &b, false),
            _ => {}
        }
    }
    match (lo, hi) {
        (Some((l, ls)), Some((h, hs))) => l < h || (l == h && !ls && !hs),
        _ => true,
    }
}

pub fn arb_set(vars: Vec<Var>) -> impl Strategy<Value = ConstraintSet> {
    let n = vars.len();
    proptest::collection::vec(raw_atoms(n, 4, 2), 0..=2).prop_map(move |ds| {
        let cs = ds.iter().map(|d| build(&vars, d)).collect();
        ConstraintSet::from_disjuncts(vars.clone(), cs).unwrap()
    })
}

pub fn params(n: usize) -> Vec<Var> {
    (0..n).map(|i| Var::param(format!("p{i}"))).collect()
}
