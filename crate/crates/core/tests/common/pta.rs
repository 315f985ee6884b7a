use proptest::prelude::*;

use paraverse_core::constraint::{Rational, Valuation};
use paraverse_core::io::parse_constraint;
use paraverse_core::pta::{initial_symbolic, replay, succ, Pta, SymbolicState};

/// Atoms where p1 only bounds clocks from below and p2 only from above.
pub fn atom(kind: usize, clock: usize, c: i64) -> String {
    let x = format!("x{}", clock + 1);
    match kind {
        0 => format!("{x} >= p1 + {c}"),
        1 => format!("{x} <= p2 + {c}"),
        2 => format!("{x} <= {c}"),
        3 => format!("{x} >= {c}"),
        4 => format!("{x} > p1"),
        _ => format!("{x} < p2 + {c}"),
    }
}

pub type RawEdge = (usize, usize, Vec<(usize, usize, i64)>, (bool, bool));

pub fn arb_lu_pta() -> impl Strategy<Value = String> {
    (1usize..=3).prop_flat_map(|n| {
        let inv = proptest::option::of((prop_oneof![Just(1usize), Just(2usize)], 0usize..2, 1i64..=4));
        let edge = (
            0..n,
            0..n,
            proptest::collection::vec((0usize..6, 0usize..2, 0i64..=3), 0..=2),
            (any::<bool>(), any::<bool>()),
        );
        (
            proptest::collection::vec(inv, n),
            proptest::collection::vec(edge, 1..=5),
        )
            .prop_map(move |(invs, edges): (Vec<_>, Vec<RawEdge>)| {
                let mut out = String::from("clocks x1 x2;\nparams p1 p2;\n");
                for (i, inv) in invs.iter().enumerate() {
                    match inv {
                        Some((k, x, c)) => out += &format!("loc l{i} invariant {};\n", atom(*k, *x, *c)),
                        None => out += &format!("loc l{i};\n"),
                    }
                }
                out += "init l0;\n";
                for (j, (s, t, atoms, (r1, r2))) in edges.iter().enumerate() {
                    out += &format!("edge l{s} -> l{t} sync e{j}");
                    if !atoms.is_empty() {
                        let g: Vec<String> = atoms.iter().map(|(k, x, c)| atom(*k, *x, *c)).collect();
                        out += &format!(" guard {}", g.join(" && "));
                    }
                    let rs: Vec<&str> = [(*r1, "x1"), (*r2, "x2")]
                        .iter()
                        .filter(|(b, _)| *b)
                        .map(|(_, x)| *x)
                        .collect();
                    if !rs.is_empty() {
                        out += &format!(" reset {{{}}}", rs.join(", "));
                    }
                    out += ";\n";
                }
                out
            })
    })
}

pub fn val(p1: Rational, p2: Rational) -> Valuation {
    Valuation::new().with("p1", p1).with("p2", p2)
}

/// Longest prefix of the script that replays.
pub fn valid_prefix(ta: &Pta, script: &[(Rational, usize)]) -> usize {
    (0..=script.len())
        .rev()
        .find(|k| replay(ta, &script[..*k]).is_ok())
        .unwrap_or(0)
}

/// Clocks and parameters range over the non-negative reals.
pub const NONNEG: &str = "x1 >= 0 && x2 >= 0 && p1 >= 0 && p2 >= 0 && p3 >= 0";

/// The six states of the symbolic run along press, press, press, cup, coffee, press.
pub const COFFEE_RUN: [(&str, &str, &str); 6] = [
    ("add_sugar", "press", "x1 = x2 && 0 <= x2 && x2 <= p2"),
    ("add_sugar", "press", "p1 <= x2 - x1 && x2 - x1 <= p2 && 0 <= x2 && x2 <= p2"),
    ("add_sugar", "press", "2*p1 <= x2 - x1 && x2 - x1 <= p2 && 0 <= x2 && x2 <= p2"),
    ("preparing_coffee", "cup", "2*p1 <= x2 - x1 && x2 - x1 <= p2 && p2 <= x2 && x2 <= p3"),
    ("done", "coffee", "0 <= x1 && x1 <= 10 && x2 - x1 = p3 && 2*p1 <= p2 && p2 <= p3"),
    ("add_sugar", "press", "x1 = x2 && 0 <= x2 && x2 <= p2 && 2*p1 <= p2 && p2 <= p3"),
];

/// Chains `succ` along the run; returns one mismatch description per state.
pub fn coffee_run_mismatches(a: &Pta) -> Vec<String> {
    let mut s: SymbolicState = initial_symbolic(a).unwrap();
    let mut bad = Vec::new();
    for (i, (loc, action, z)) in COFFEE_RUN.into_iter().enumerate() {
        let e = a.edge_index(a.location_name(s.location), action).unwrap();
        s = match succ(a, &s, e) {
            Some(n) => n,
            None => {
                bad.push(format!("state {} is empty", i + 2));
                break;
            }
        };
        let expect = parse_constraint(&format!("{z} && {NONNEG}"), &a.context()).unwrap();
        if a.location_name(s.location) != loc || !s.zone.equivalent(&expect) {
            bad.push(format!("state {}: got {} at {}", i + 2, s.zone, a.location_name(s.location)));
        }
    }
    bad
}

