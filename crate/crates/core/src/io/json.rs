//! Schema-versioned JSON for results, with readers for round trips.
//!
//! Rationals are always `"num/den"` strings. Object keys are sorted, so
//! output is byte-identical across runs.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::constraint::{
    parse_rational, AtomicConstraint, ConstraintSet, ConvexConstraint, LinearTerm, Rational, Rel,
    Valuation, Var,
};
use crate::mts::{Mts, ParamValuation, StateValFun, Universe};
use crate::ppn::{Count, KmAnalysis, OmegaMarking};

pub const SCHEMA: &str = "paraverse/1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("unexpected JSON shape at {path}: {message}")]
    Shape { path: String, message: String },
}

fn shape(path: &str, message: impl Into<String>) -> JsonError {
    JsonError::Shape {
        path: path.to_string(),
        message: message.into(),
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn read_rational(v: &Value, path: &str) -> Result<Rational, JsonError> {
    v.as_str()
        .and_then(parse_rational)
        .ok_or_else(|| shape(path, "expected a \"num/den\" string"))
}

/// Wraps a result body with the schema tag.
pub fn envelope(formalism: &str, query: &str, answer: &str, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "formalism": formalism,
        "query": query,
        "answer": answer,
        "result": result,
    })
}

/// Pretty-printed, newline-terminated.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
}

pub fn valuation(v: &Valuation) -> Value {
    Value::Object(v.iter().map(|(k, r)| (k.clone(), rational(r))).collect())
}

pub fn read_valuation(v: &Value, path: &str) -> Result<Valuation, JsonError> {
    let obj = v.as_object().ok_or_else(|| shape(path, "expected an object"))?;
    let mut out = Valuation::new();
    for (k, r) in obj {
        out.set(k.clone(), read_rational(r, &format!("{path}.{k}"))?);
    }
    Ok(out)
}

fn atom(a: &AtomicConstraint) -> Value {
    let coeffs: Map<String, Value> = a
        .term
        .coeffs()
        .iter()
        .map(|(v, c)| (v.name().to_string(), rational(&Rational::from_integer(c.clone()))))
        .collect();
    json!({
        "coeffs": coeffs,
        "constant": rational(a.term.constant_part()),
        "rel": a.rel.symbol(),
        "text": a.to_string(),
    })
}

/// `{"disjuncts": [[atom, ...], ...]}`; each atom reads `Σ coeffs·v + constant rel 0`.
pub fn constraint_set(s: &ConstraintSet) -> Value {
    let disjuncts: Vec<Value> = s
        .disjuncts()
        .iter()
        .map(|c| Value::Array(c.atoms().iter().map(atom).collect()))
        .collect();
    json!({ "disjuncts": disjuncts })
}

pub fn read_constraint_set(v: &Value, context: &[Var]) -> Result<ConstraintSet, JsonError> {
    let ds = v
        .get("disjuncts")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("disjuncts", "expected an array"))?;
    let mut out = Vec::new();
    for (i, d) in ds.iter().enumerate() {
        let path = format!("disjuncts[{i}]");
        let atoms = d.as_array().ok_or_else(|| shape(&path, "expected an array"))?;
        let mut parsed = Vec::new();
        for (j, a) in atoms.iter().enumerate() {
            let path = format!("{path}[{j}]");
            let rel = a
                .get("rel")
                .and_then(Value::as_str)
                .and_then(Rel::from_symbol)
                .ok_or_else(|| shape(&path, "bad relation"))?;
            let constant = read_rational(a.get("constant").unwrap_or(&Value::Null), &path)?;
            let obj = a
                .get("coeffs")
                .and_then(Value::as_object)
                .ok_or_else(|| shape(&path, "expected coefficients"))?;
            let mut coeffs = Vec::new();
            for (name, c) in obj {
                let var = context
                    .iter()
                    .find(|x| x.name() == name)
                    .ok_or_else(|| shape(&path, format!("unknown variable `{name}`")))?;
                coeffs.push((var.clone(), read_rational(c, &path)?));
            }
            parsed.push(AtomicConstraint::new(LinearTerm::from_rational(coeffs, constant), rel));
        }
        out.push(
            ConvexConstraint::new(context.to_vec(), parsed).map_err(|e| shape(&path, e.to_string()))?,
        );
    }
    ConstraintSet::from_disjuncts(context.to_vec(), out).map_err(|e| shape("disjuncts", e.to_string()))
}

fn param_valuation(u: &Universe, v: &ParamValuation) -> Value {
    let m: Map<String, Value> = u
        .vars()
        .iter()
        .zip(&v.0)
        .map(|(x, mask)| {
            let acts: Vec<Value> = u.action_set(*mask).into_iter().map(|a| json!(a)).collect();
            (x.clone(), Value::Array(acts))
        })
        .collect();
    Value::Object(m)
}

/// `{"states": [{"state": s, "valuations": [{Y: [actions]}, ...]}]}` in state order.
pub fn state_val_fun(m: &Mts, f: &StateValFun) -> Value {
    let u = m.universe();
    let states: Vec<Value> = m
        .states()
        .iter()
        .zip(f)
        .map(|(s, vs)| {
            let vals: Vec<Value> = vs.members(&u).map(|v| param_valuation(&u, &v)).collect();
            json!({ "state": s, "valuations": vals })
        })
        .collect();
    json!({ "states": states })
}

pub fn read_state_val_fun(m: &Mts, v: &Value) -> Result<StateValFun, JsonError> {
    let u = m.universe();
    let states = v
        .get("states")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("states", "expected an array"))?;
    if states.len() != m.states().len() {
        return Err(shape("states", "one entry per state expected"));
    }
    let mut out = Vec::new();
    for (i, entry) in states.iter().enumerate() {
        let path = format!("states[{i}]");
        if entry.get("state").and_then(Value::as_str) != Some(m.states()[i].as_str()) {
            return Err(shape(&path, "state names out of order"));
        }
        let vals = entry
            .get("valuations")
            .and_then(Value::as_array)
            .ok_or_else(|| shape(&path, "expected valuations"))?;
        let mut set = u.empty();
        for val in vals {
            let obj = val.as_object().ok_or_else(|| shape(&path, "expected an object"))?;
            let mut masks = Vec::new();
            for x in u.vars() {
                let acts = obj
                    .get(x)
                    .and_then(Value::as_array)
                    .ok_or_else(|| shape(&path, format!("missing variable `{x}`")))?;
                let mut mask = 0u32;
                for a in acts {
                    let i = a
                        .as_str()
                        .and_then(|a| m.action_index(a))
                        .ok_or_else(|| shape(&path, "unknown action"))?;
                    mask |= 1 << i;
                }
                if mask == 0 {
                    return Err(shape(&path, "action sets must be nonempty"));
                }
                masks.push(mask);
            }
            set.insert(&u, &ParamValuation(masks));
        }
        out.push(set);
    }
    Ok(out)
}

fn count(c: &Count) -> Value {
    match c {
        Count::Fin(n) => json!(n),
        Count::Omega => json!("omega"),
    }
}

fn read_count(v: &Value, path: &str) -> Result<Count, JsonError> {
    match v {
        Value::String(s) if s == "omega" => Ok(Count::Omega),
        _ => v
            .as_u64()
            .map(Count::Fin)
            .ok_or_else(|| shape(path, "expected a natural number or \"omega\"")),
    }
}

/// What the JSON keeps of a Karp–Miller analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmSummary {
    pub places: Vec<String>,
    pub bounded: bool,
    pub nodes: usize,
    pub cover_set: Vec<OmegaMarking>,
    pub place_bounds: Vec<Count>,
    pub unbounded_place_sets: Vec<BTreeSet<usize>>,
}

impl KmSummary {
    pub fn new(places: &[String], km: &KmAnalysis) -> Self {
        KmSummary {
            places: places.to_vec(),
            bounded: km.bounded,
            nodes: km.nodes.len(),
            cover_set: km.cover_set.clone(),
            place_bounds: km.place_bounds(),
            unbounded_place_sets: km.unbounded_place_sets.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let marking = |m: &OmegaMarking| Value::Array(m.iter().map(count).collect());
        let sets: Vec<Value> = self
            .unbounded_place_sets
            .iter()
            .map(|x| Value::Array(x.iter().map(|p| json!(self.places[*p])).collect()))
            .collect();
        json!({
            "places": self.places,
            "bounded": self.bounded,
            "nodes": self.nodes,
            "cover_set": self.cover_set.iter().map(marking).collect::<Vec<_>>(),
            "place_bounds": marking(&self.place_bounds),
            "unbounded_place_sets": sets,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let places: Vec<String> = v
            .get("places")
            .and_then(Value::as_array)
            .ok_or_else(|| shape("places", "expected an array"))?
            .iter()
            .map(|p| p.as_str().map(str::to_string).ok_or_else(|| shape("places", "expected names")))
            .collect::<Result<_, _>>()?;
        let marking = |m: &Value, path: &str| -> Result<OmegaMarking, JsonError> {
            let arr = m.as_array().ok_or_else(|| shape(path, "expected an array"))?;
            if arr.len() != places.len() {
                return Err(shape(path, "one entry per place expected"));
            }
            arr.iter().map(|c| read_count(c, path)).collect()
        };
        let cover_set = v
            .get("cover_set")
            .and_then(Value::as_array)
            .ok_or_else(|| shape("cover_set", "expected an array"))?
            .iter()
            .map(|m| marking(m, "cover_set"))
            .collect::<Result<_, _>>()?;
        let place_bounds = marking(v.get("place_bounds").unwrap_or(&Value::Null), "place_bounds")?;
        let mut unbounded_place_sets = Vec::new();
        for x in v
            .get("unbounded_place_sets")
            .and_then(Value::as_array)
            .ok_or_else(|| shape("unbounded_place_sets", "expected an array"))?
        {
            let arr = x
                .as_array()
                .ok_or_else(|| shape("unbounded_place_sets", "expected an array"))?;
            let mut set = BTreeSet::new();
            for p in arr {
                let i = p
                    .as_str()
                    .and_then(|p| places.iter().position(|q| q == p))
                    .ok_or_else(|| shape("unbounded_place_sets", "unknown place"))?;
                set.insert(i);
            }
            unbounded_place_sets.push(set);
        }
        Ok(KmSummary {
            bounded: v
                .get("bounded")
                .and_then(Value::as_bool)
                .ok_or_else(|| shape("bounded", "expected a boolean"))?,
            nodes: v
                .get("nodes")
                .and_then(Value::as_u64)
                .ok_or_else(|| shape("nodes", "expected a count"))? as usize,
            places,
            cover_set,
            place_bounds,
            unbounded_place_sets,
        })
    }
}
