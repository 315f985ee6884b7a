use std::collections::BTreeSet;

use num_traits::Signed;

use crate::constraint::{AtomicConstraint, ConvexConstraint, Rel, Valuation};

use super::dbm::concrete_reach;
use super::{Pta, PtaError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LuClass {
    Lu {
        lower: BTreeSet<String>,
        upper: BTreeSet<String>,
    },
    LowerOnly(BTreeSet<String>),
    UpperOnly(BTreeSet<String>),
    NotLu,
}

#[derive(Default, Clone, Copy)]
struct Polarity {
    lower: bool,
    upper: bool,
}

/// Records, for each parameter of a `x ⋈ plt` atom, whether it bounds the
/// clock from above or from below.
fn record(atom: &AtomicConstraint, seen: &mut std::collections::BTreeMap<String, Polarity>) {
    let Some((_, k)) = atom.term.coeffs().iter().find(|(v, _)| v.is_clock()) else {
        return;
    };
    // k·x + rest ⋈ 0. Rewritten as x ⋈' plt, a parameter's coefficient in
    // plt has the opposite sign of its coefficient in `rest` when k > 0.
    let rel = if k.is_positive() { atom.rel } else { atom.rel.flipped() };
    for (v, c) in atom.term.coeffs() {
        if !v.is_param() {
            continue;
        }
        let beta_positive = if k.is_positive() { c.is_negative() } else { c.is_positive() };
        let entry = seen.entry(v.name().to_string()).or_default();
        let (as_upper, as_lower) = match rel {
            Rel::Lt | Rel::Le => (beta_positive, !beta_positive),
            Rel::Gt | Rel::Ge => (!beta_positive, beta_positive),
            Rel::Eq => (true, true),
        };
        entry.upper |= as_upper;
        entry.lower |= as_lower;
    }
}

pub fn classify_lu(pta: &Pta) -> LuClass {
    let mut seen = std::collections::BTreeMap::new();
    let all = pta
        .invariants
        .iter()
        .chain(pta.edges().iter().map(|e| &e.guard));
    for c in all {
        for a in c.atoms() {
            record(a, &mut seen);
        }
    }
    let mut lower = BTreeSet::new();
    let mut upper = BTreeSet::new();
    for (p, pol) in seen {
        match (pol.lower, pol.upper) {
            (true, true) => return LuClass::NotLu,
            (true, false) => {
                lower.insert(p);
            }
            (false, true) => {
                upper.insert(p);
            }
            (false, false) => {}
        }
    }
    match (lower.is_empty(), upper.is_empty()) {
        (false, true) => LuClass::LowerOnly(lower),
        (true, false) => LuClass::UpperOnly(upper),
        _ => LuClass::Lu { lower, upper },
    }
}

/// Decides whether no parameter valuation reaches `targets`.
///
/// Lower-bound parameters are set to 0 (or their declared minimum) and atoms
/// mentioning an upper-bound parameter are dropped: by the polarity rules
/// each such atom reads `x ≤ c + β·p` with `β > 0` (or the symmetric `≥`
/// form with `β < 0`), so it is implied by any clock value once `p` is
/// large enough. Monotonicity makes this extremal valuation the most
/// permissive one, so the target is reachable for some valuation iff it is
/// reachable in the resulting automaton. A declared upper bound on an
/// upper-bound parameter is substituted instead of dropping its atoms.
pub fn lu_ef_emptiness(pta: &Pta, targets: &BTreeSet<usize>) -> Result<bool, PtaError> {
    let upper = match classify_lu(pta) {
        LuClass::NotLu => return Err(PtaError::NotLu),
        LuClass::Lu { upper, .. } | LuClass::UpperOnly(upper) => upper,
        LuClass::LowerOnly(_) => BTreeSet::new(),
    };
    let mut fixed = Valuation::new();
    for p in pta.params() {
        let name = p.name();
        let bounds = pta.bounds().get(name);
        if upper.contains(name) {
            if let Some((_, hi)) = bounds {
                fixed.set(name, hi.clone());
            }
        } else {
            // lower-bound or unused
            let lo = bounds
                .map(|(lo, _)| lo.clone())
                .unwrap_or_else(|| crate::constraint::int(0));
            fixed.set(name, lo);
        }
    }
    let clocks = pta.clocks().to_vec();
    let relaxed = pta.map_constraints(Vec::new(), |c| {
        let atoms: Vec<AtomicConstraint> = c
            .substitute(&fixed)
            .atoms()
            .iter()
            .filter(|a| !a.term.vars().any(|v| v.is_param()))
            .cloned()
            .collect();
        ConvexConstraint::new(clocks.clone(), atoms).expect("only clocks remain")
    });
    Ok(!concrete_reach(&relaxed, targets)?)
}
