use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use paraverse_core::constraint::Valuation;
use paraverse_core::io::json::{constraint_set, state_val_fun, valuation, KmSummary};
use paraverse_core::io::{
    parse_mc, parse_mts, parse_mts_query, parse_pimc, parse_pimc_query, parse_ppn, parse_ppn_query, parse_pta,
    parse_pta_query, print_mc, ModelError, ParseError, PimcQuery, PpnMode, PpnProperty, PtaQuery,
};
use paraverse_core::mts::{minimal_valuations, synthesize};
use paraverse_core::pimc::{is_consistent, n_consistent, satisfies, synthesize_consistency, Imc, Pimc};
use paraverse_core::ppn::{decide, km_analyze, Answer, Mode, Ppn, Property, Witness};
use paraverse_core::pta::{
    concrete_reach, ec_check, ef_synthesis, ip_check, lu_ef_emptiness, EcVerdict, IpVerdict, PtaError,
};

use crate::limits::Limits;
use crate::{CliError, Exit};

/// Largest coordinate tried when looking for integer points in a zone.
const IP_SEARCH_BOUND: u64 = 20;

/// What a query produced. `text` is printed for definite answers only.
#[derive(Debug)]
pub struct Report {
    pub exit: Exit,
    pub answer: String,
    pub text: String,
    pub result: Value,
}

impl Report {
    fn new(exit: Exit, answer: &str, text: String, result: Value) -> Report {
        Report {
            exit,
            answer: answer.to_string(),
            text,
            result,
        }
    }

    fn verdict(yes: bool, text: String, result: Value) -> Report {
        if yes {
            Report::new(Exit::Definite, "yes", text, result)
        } else {
            Report::new(Exit::Negative, "no", text, result)
        }
    }

    fn unknown(reason: impl Into<String>) -> Report {
        Report::new(Exit::Unknown, "unknown", reason.into(), Value::Null)
    }
}

fn model_error(e: ModelError) -> CliError {
    CliError::Input(e.to_string())
}

fn query_error(e: ParseError) -> CliError {
    CliError::Input(format!("query {e}"))
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

pub fn pta(path: &Path, text: &str, query: &str, limits: &Limits) -> Result<Report, CliError> {
    let a = parse_pta(text, Some(file_name(path))).map_err(model_error)?;
    let q = parse_pta_query(query).map_err(query_error)?;
    match q {
        PtaQuery::EfSynth(names) => {
            let targets = a.locations_named(&names).map_err(input)?;
            let (set, complete) = ef_synthesis(&a, &targets, limits.pta()).map_err(input)?;
            if !complete {
                return Ok(Report::unknown(
                    "exploration stopped at the limits; the synthesized set may be incomplete",
                ));
            }
            Ok(Report::new(Exit::Definite, "set", format!("{set}\n"), constraint_set(&set)))
        }
        PtaQuery::Reach { at, targets } => {
            let targets = a.locations_named(&targets).map_err(input)?;
            let ta = a.instantiate(&at).map_err(input)?;
            let yes = concrete_reach(&ta, &targets).map_err(input)?;
            let text = format!("{}: targets {}reachable at {at}\n", yes_no(yes), if yes { "" } else { "not " });
            Ok(Report::verdict(yes, text, json!({ "valuation": valuation(&at), "reachable": yes })))
        }
        PtaQuery::LuEmptiness(names) => {
            let targets = a.locations_named(&names).map_err(input)?;
            let empty = match lu_ef_emptiness(&a, &targets) {
                Err(PtaError::NotLu) => {
                    return Err(CliError::Input("lu-emptiness needs an L/U automaton".into()))
                }
                other => other.map_err(input)?,
            };
            let text = if empty {
                "yes: no parameter valuation reaches the targets\n".to_string()
            } else {
                "no: some parameter valuation reaches the targets\n".to_string()
            };
            Ok(Report::verdict(empty, text, json!({ "empty": empty })))
        }
        PtaQuery::IpCheck => match ip_check(&a, limits.pta(), IP_SEARCH_BOUND).map_err(input)? {
            IpVerdict::Yes => Ok(Report::verdict(
                true,
                "yes: every reachable symbolic state has an integer point\n".into(),
                json!({ "ip": true }),
            )),
            IpVerdict::No(s) => {
                let loc = a.location_name(s.location);
                let text = format!("no: the state at {loc} with zone {} has no integer point\n", s.zone);
                let result = json!({ "ip": false, "location": loc, "zone": s.zone.to_string() });
                Ok(Report::verdict(false, text, result))
            }
            IpVerdict::Unknown => Ok(Report::unknown(
                "exploration or the integer-point search stopped at the limits",
            )),
        },
        PtaQuery::EcCheck(at) => {
            let ta = a.instantiate(&at).map_err(input)?;
            match ec_check(&ta).map_err(input)? {
                EcVerdict::Yes => Ok(Report::verdict(
                    true,
                    "yes: an infinite run exists\n".into(),
                    json!({ "valuation": valuation(&at), "infinite_run": true }),
                )),
                EcVerdict::Unknown => Ok(Report::unknown("no cycle found in the zone graph")),
            }
        }
    }
}

pub fn pimc(path: &Path, text: &str, query: &str) -> Result<Report, CliError> {
    let model = parse_pimc(text, Some(file_name(path))).map_err(model_error)?;
    let q = parse_pimc_query(query).map_err(query_error)?;
    match q {
        PimcQuery::ConsistencySynth => {
            let set = synthesize_consistency(&model);
            Ok(Report::new(Exit::Definite, "set", format!("{set}\n"), constraint_set(&set)))
        }
        PimcQuery::Consistent(at) => {
            let imc = instance(&model, at.unwrap_or_default())?;
            let (ok, witness) = is_consistent(&imc);
            let mut text = format!("{}\n", yes_no(ok));
            let mut result = json!({ "consistent": ok });
            if let Some(mc) = witness {
                let printed = print_mc(&mc);
                text.push_str(&printed);
                result["witness"] = json!(printed);
            }
            Ok(Report::verdict(ok, text, result))
        }
        PimcQuery::NConsistent { state, n } => {
            let imc = instance(&model, Valuation::new())?;
            let s = imc
                .state_index(&state)
                .ok_or_else(|| CliError::Input(format!("unknown state `{state}`")))?;
            let ok = n_consistent(&imc, s, n).map_err(input)?;
            let text = format!("{}: {state} is {}{n}-consistent\n", yes_no(ok), if ok { "" } else { "not " });
            Ok(Report::verdict(ok, text, json!({ "state": state, "n": n, "consistent": ok })))
        }
        PimcQuery::SatisfiedBy(chain) => {
            let imc = instance(&model, Valuation::new())?;
            let mc_text = std::fs::read_to_string(&chain).map_err(|e| CliError::Input(format!("{chain}: {e}")))?;
            let mc = parse_mc(&mc_text, Some(Arc::from(chain.as_str()))).map_err(model_error)?;
            let (ok, witness) = satisfies(&mc, &imc);
            let mut text = format!("{}\n", yes_no(ok));
            let mut result = json!({ "satisfies": ok });
            if let Some(w) = witness {
                let pairs: Vec<Value> = w
                    .relation
                    .iter()
                    .map(|(t, s)| json!([mc.states()[*t], imc.states()[*s]]))
                    .collect();
                for (t, s) in &w.relation {
                    let _ = writeln!(text, "  {} R {}", mc.states()[*t], imc.states()[*s]);
                }
                result["relation"] = Value::Array(pairs);
            }
            Ok(Report::verdict(ok, text, result))
        }
    }
}

fn instance(model: &Pimc, v: Valuation) -> Result<Imc, CliError> {
    model.instantiate(&v).map_err(input)
}

pub fn mts(path: &Path, text: &str, query: &str) -> Result<Report, CliError> {
    let m = parse_mts(text, Some(file_name(path))).map_err(model_error)?;
    let phi = parse_mts_query(query).map_err(query_error)?;
    let f = synthesize(&m, &phi).map_err(input)?;
    let u = m.universe();
    let mut out = String::new();
    for (s, set) in f.iter().enumerate() {
        let _ = writeln!(out, "{}: {} of {} valuations", m.states()[s], set.len(), u.size());
    }
    let init = &f[m.initial()];
    let _ = writeln!(out, "at {}:", m.states()[m.initial()]);
    for v in init.members(&u) {
        let _ = writeln!(out, "  {}", u.display(&v));
    }
    let mins = minimal_valuations(&u, init);
    let _ = writeln!(out, "minimal valuations at {}:", m.states()[m.initial()]);
    for v in &mins {
        let _ = writeln!(out, "  {}", u.display(v));
    }
    Ok(Report::new(Exit::Definite, "set", out, state_val_fun(&m, &f)))
}

fn marking(ppn: &Ppn, entries: &[(String, u64)]) -> Result<Vec<u64>, CliError> {
    let mut m = vec![0; ppn.places().len()];
    for (p, n) in entries {
        let i = ppn
            .place_index(p)
            .ok_or_else(|| CliError::Input(format!("unknown place `{p}`")))?;
        m[i] = *n;
    }
    Ok(m)
}

fn witness_json(ppn: &Ppn, w: &Witness) -> Value {
    let run = w
        .run
        .as_ref()
        .map(|r| json!(r.iter().map(|t| ppn.transitions()[*t].clone()).collect::<Vec<_>>()));
    json!({ "valuation": valuation(&w.valuation), "run": run.unwrap_or(Value::Null) })
}

fn witness_text(ppn: &Ppn, w: &Witness) -> String {
    let mut out = format!("  valuation {}\n", w.valuation);
    if let Some(run) = &w.run {
        let names: Vec<&str> = run.iter().map(|t| ppn.transitions()[*t].as_str()).collect();
        let _ = writeln!(out, "  run [{}]", names.join(", "));
    }
    out
}

pub fn ppn(path: &Path, text: &str, query: &str, limits: &Limits) -> Result<Report, CliError> {
    let net = parse_ppn(text, Some(file_name(path))).map_err(model_error)?;
    let q = parse_ppn_query(query).map_err(query_error)?;
    let mode = match q.mode {
        PpnMode::Exists => Mode::Exists,
        PpnMode::Forall => Mode::Forall,
        PpnMode::At(v) => Mode::At(v),
    };
    let property = match &q.property {
        PpnProperty::Cover(m) => Property::Cover(marking(&net, m)?),
        PpnProperty::Reach(m) => Property::Reach(marking(&net, m)?),
        PpnProperty::Bounded => Property::Bounded,
        PpnProperty::Simultaneous(names) => {
            let mut set = std::collections::BTreeSet::new();
            for p in names {
                set.insert(
                    net.place_index(p)
                        .ok_or_else(|| CliError::Input(format!("unknown place `{p}`")))?,
                );
            }
            Property::Simultaneous(set)
        }
        PpnProperty::Km => {
            let v = match mode {
                Mode::At(v) => v,
                _ if net.params().is_empty() => Valuation::new(),
                _ => return Err(CliError::Input("km needs a parameter-free net or `at (...)`".into())),
            };
            let instance = net.instantiate(&v).map_err(input)?;
            let summary = KmSummary::new(instance.places(), &km_analyze(&instance));
            let mut out = format!("bounded: {}\nnodes: {}\n", summary.bounded, summary.nodes);
            for (p, b) in summary.places.iter().zip(&summary.place_bounds) {
                let _ = writeln!(out, "  {p} <= {b}");
            }
            return Ok(Report::new(Exit::Definite, "summary", out, summary.to_json()));
        }
    };
    match decide(&net, &mode, &property, &limits.ppn()).map_err(input)? {
        Answer::Yes(w) => {
            let mut text = "yes\n".to_string();
            let mut result = json!({ "holds": true });
            if let Some(w) = &w {
                text.push_str(&witness_text(&net, w));
                result["witness"] = witness_json(&net, w);
            }
            Ok(Report::verdict(true, text, result))
        }
        Answer::No(w) => {
            let mut text = "no\n".to_string();
            let mut result = json!({ "holds": false });
            if let Some(w) = &w {
                text.push_str(&witness_text(&net, w));
                result["witness"] = witness_json(&net, w);
            }
            Ok(Report::verdict(false, text, result))
        }
        Answer::Unknown => Ok(Report::unknown("no answer within the limits")),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn file_name(path: &Path) -> Arc<str> {
    Arc::from(path.display().to_string())
}
