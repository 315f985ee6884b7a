//! Difference-bound matrices for parameter-free automata.
//!
//! Constants are first scaled by the lcm of all denominators so every bound
//! is an integer; zones are then normalized with the global maximal constant
//! (Extra_M), which makes the zone graph finite.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::constraint::{Rational, Rel};

use super::{Pta, PtaError};

/// `x_i - x_j ≺ c`; `None` is +∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct B(Option<(i64, bool)>);

const INF: B = B(None);
const LE0: B = B(Some((0, false)));

impl B {
    fn le(c: i64) -> B {
        B(Some((c, false)))
    }
    fn lt(c: i64) -> B {
        B(Some((c, true)))
    }
    fn add(self, o: B) -> B {
        match (self.0, o.0) {
            (Some((a, sa)), Some((b, sb))) => B(Some((a + b, sa || sb))),
            _ => INF,
        }
    }
}

impl PartialOrd for B {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for B {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (None, None) => Ordering::Equal,
            (None, _) => Ordering::Greater,
            (_, None) => Ordering::Less,
            // strict is smaller at the same constant
            (Some((a, sa)), Some((b, sb))) => a.cmp(&b).then_with(|| sb.cmp(&sa)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Dbm {
    n: usize,
    m: Vec<B>,
}

impl Dbm {
    fn zero(clocks: usize) -> Dbm {
        let n = clocks + 1;
        Dbm {
            n,
            m: vec![LE0; n * n],
        }
    }
    fn get(&self, i: usize, j: usize) -> B {
        self.m[i * self.n + j]
    }
    fn set(&mut self, i: usize, j: usize, b: B) {
        self.m[i * self.n + j] = b;
    }
    fn canonicalize(&mut self) {
        let n = self.n;
        for k in 0..n {
            for i in 0..n {
                let ik = self.get(i, k);
                if ik == INF {
                    continue;
                }
                for j in 0..n {
                    let via = ik.add(self.get(k, j));
                    if via < self.get(i, j) {
                        self.set(i, j, via);
                    }
                }
            }
        }
    }
    fn is_empty(&self) -> bool {
        (0..self.n).any(|i| self.get(i, i) < LE0)
    }
    fn constrain(&mut self, i: usize, j: usize, b: B) {
        if b < self.get(i, j) {
            self.set(i, j, b);
            self.canonicalize();
        }
    }
    fn up(&mut self) {
        for i in 1..self.n {
            self.set(i, 0, INF);
        }
    }
    fn reset(&mut self, x: usize) {
        for j in 0..self.n {
            let b0j = self.get(0, j);
            let bj0 = self.get(j, 0);
            self.set(x, j, b0j);
            self.set(j, x, bj0);
        }
        self.set(x, x, LE0);
    }
    fn extrapolate(&mut self, max: i64) {
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let b = self.get(i, j);
                if b > B::le(max) {
                    self.set(i, j, INF);
                } else if b < B::lt(-max) {
                    self.set(i, j, B::lt(-max));
                }
            }
        }
        self.canonicalize();
    }
    fn included_in(&self, o: &Dbm) -> bool {
        self.m.iter().zip(o.m.iter()).all(|(a, b)| a <= b)
    }
}

/// One `x_i - x_j ≺ c` per atom.
type Guard = Vec<(usize, usize, B)>;

struct Compiled {
    invariants: Vec<Guard>,
    guards: Vec<Guard>,
    resets: Vec<Vec<usize>>,
    max: i64,
    clocks: usize,
}

fn compile(ta: &Pta) -> Result<Compiled, PtaError> {
    if !ta.is_parameter_free() {
        return Err(PtaError::NotParameterFree);
    }
    let clocks = ta.clocks();
    let all = ta
        .invariants
        .iter()
        .chain(ta.edges().iter().map(|e| &e.guard));
    let mut scale = BigInt::one();
    for c in all.clone() {
        for a in c.atoms() {
            scale = scale.lcm(a.term.constant_part().denom());
        }
    }
    let scale = Rational::from_integer(scale);
    let mut max: i64 = 0;
    let mut translate = |c: &crate::constraint::ConvexConstraint| -> Result<Guard, PtaError> {
        let mut out = Vec::new();
        for a in c.atoms() {
            let k = (a.term.constant_part() * &scale).to_integer();
            let k = k
                .to_i64()
                .ok_or_else(|| PtaError::Invalid(vec!["constant too large".into()]))?;
            max = max.max(k.abs());
            if a.is_ground() {
                if !a.rel.holds(&Rational::from_integer(k.into())) {
                    // Unsatisfiable atom: 0 - 0 < 0.
                    out.push((0, 0, B::lt(0)));
                }
                continue;
            }
            let (v, coeff) = a.term.coeffs().iter().next().expect("non-ground");
            let xi = clocks.iter().position(|c| c == v).expect("clock") + 1;
            // coeff·x + k ⋈ 0 with coeff = ±1: either x ⋈ -k or x flip(⋈) k
            let (rel, bound) = if coeff.is_positive() {
                (a.rel, -k)
            } else {
                (a.rel.flipped(), k)
            };
            let upper = |strict: bool| (xi, 0, B(Some((bound, strict))));
            let lower = |strict: bool| (0, xi, B(Some((-bound, strict))));
            match rel {
                Rel::Lt => out.push(upper(true)),
                Rel::Le => out.push(upper(false)),
                Rel::Eq => {
                    out.push(upper(false));
                    out.push(lower(false));
                }
                Rel::Ge => out.push(lower(false)),
                Rel::Gt => out.push(lower(true)),
            }
        }
        Ok(out)
    };
    let mut invariants = Vec::new();
    for inv in &ta.invariants {
        invariants.push(translate(inv)?);
    }
    let mut guards = Vec::new();
    for e in ta.edges() {
        guards.push(translate(&e.guard)?);
    }
    let resets = ta
        .edges()
        .iter()
        .map(|e| {
            e.resets
                .iter()
                .map(|r| clocks.iter().position(|c| c == r).expect("clock") + 1)
                .collect()
        })
        .collect();
    Ok(Compiled {
        invariants,
        guards,
        resets,
        max,
        clocks: clocks.len(),
    })
}

fn apply(z: &mut Dbm, g: &Guard) {
    for (i, j, b) in g {
        z.constrain(*i, *j, *b);
    }
}

fn initial(c: &Compiled, l0: usize) -> Option<Dbm> {
    let mut z = Dbm::zero(c.clocks);
    apply(&mut z, &c.invariants[l0]);
    if z.is_empty() {
        return None;
    }
    z.up();
    apply(&mut z, &c.invariants[l0]);
    z.extrapolate(c.max);
    (!z.is_empty()).then_some(z)
}

fn successor(c: &Compiled, ta: &Pta, z: &Dbm, e: usize) -> Option<Dbm> {
    let edge = &ta.edges()[e];
    let mut z = z.clone();
    apply(&mut z, &c.guards[e]);
    if z.is_empty() {
        return None;
    }
    for &r in &c.resets[e] {
        z.reset(r);
    }
    apply(&mut z, &c.invariants[edge.target]);
    if z.is_empty() {
        return None;
    }
    z.up();
    apply(&mut z, &c.invariants[edge.target]);
    z.extrapolate(c.max);
    (!z.is_empty()).then_some(z)
}

/// Whether some location in `targets` is reachable in the parameter-free automaton.
pub fn concrete_reach(ta: &Pta, targets: &BTreeSet<usize>) -> Result<bool, PtaError> {
    let c = compile(ta)?;
    let Some(z0) = initial(&c, ta.initial()) else {
        return Ok(false);
    };
    let mut stored: Vec<(usize, Dbm)> = vec![(ta.initial(), z0)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (loc, z) = stored[i].clone();
        if targets.contains(&loc) {
            return Ok(true);
        }
        for (e, edge) in ta.edges_from(loc) {
            let Some(nz) = successor(&c, ta, &z, e) else {
                continue;
            };
            let covered = stored
                .iter()
                .any(|(l, s)| *l == edge.target && nz.included_in(s));
            if !covered {
                stored.push((edge.target, nz));
                queue.push_back(stored.len() - 1);
            }
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcVerdict {
    Yes,
    Unknown,
}

/// Looks for an infinite sequence of discrete transitions: a cycle in the
/// normalized zone graph, or a path revisiting a location with a zone that
/// contains an earlier zone of that location.
pub fn ec_check(ta: &Pta) -> Result<EcVerdict, PtaError> {
    let c = compile(ta)?;
    let Some(z0) = initial(&c, ta.initial()) else {
        return Ok(EcVerdict::Unknown);
    };
    let mut nodes: Vec<(usize, Dbm)> = vec![(ta.initial(), z0.clone())];
    let mut index: HashMap<(usize, Dbm), usize> = HashMap::new();
    index.insert((ta.initial(), z0), 0);
    let mut succs: Vec<Option<Vec<usize>>> = vec![None];
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8];
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    let mut path: Vec<usize> = vec![0];
    color[0] = 1;
    while let Some(&(u, k)) = stack.last() {
        if succs[u].is_none() {
            let (loc, z) = nodes[u].clone();
            let mut out = Vec::new();
            for (e, edge) in ta.edges_from(loc) {
                if let Some(nz) = successor(&c, ta, &z, e) {
                    let key = (edge.target, nz);
                    let id = match index.get(&key) {
                        Some(id) => *id,
                        None => {
                            nodes.push(key.clone());
                            succs.push(None);
                            color.push(0);
                            let id = nodes.len() - 1;
                            index.insert(key, id);
                            id
                        }
                    };
                    out.push(id);
                }
            }
            succs[u] = Some(out);
        }
        let list = succs[u].as_ref().expect("computed");
        if k >= list.len() {
            color[u] = 2;
            stack.pop();
            path.pop();
            continue;
        }
        let v = list[k];
        stack.last_mut().expect("non-empty").1 += 1;
        match color[v] {
            1 => return Ok(EcVerdict::Yes),
            2 => {}
            _ => {
                let (lv, zv) = &nodes[v];
                let grows = path
                    .iter()
                    .any(|&a| nodes[a].0 == *lv && nodes[a].1.included_in(zv));
                if grows {
                    return Ok(EcVerdict::Yes);
                }
                color[v] = 1;
                stack.push((v, 0));
                path.push(v);
            }
        }
    }
    Ok(EcVerdict::Unknown)
}
