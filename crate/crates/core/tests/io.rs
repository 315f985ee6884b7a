use paraverse_core::constraint::{ratio, ConstraintSet, Var};
use paraverse_core::io::json::{self, KmSummary};
use paraverse_core::io::{
    parse_imc, parse_mc, parse_mts, parse_mts_query, parse_pimc, parse_ppn, parse_pta,
    parse_pta_query, print_imc, print_mc, print_mts, print_pimc, print_ppn, print_pta, ModelError,
    ParseError,
};
use paraverse_core::mts::synthesize;
use paraverse_core::pimc::Endpoint;
use paraverse_core::ppn::km_analyze;
use paraverse_core::pta::{ef_synthesis, Limits};

fn corpus(name: &str) -> String {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn parse_err(r: Result<impl std::fmt::Debug, ModelError>) -> ParseError {
    match r {
        Err(ModelError::Parse(e)) => e,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn every_corpus_file_round_trips() {
    let dir = format!("{}/../../corpus", env!("CARGO_MANIFEST_DIR"));
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let text = std::fs::read_to_string(&path).unwrap();
        match path.extension().and_then(|e| e.to_str()) {
            Some("pta") => {
                let a = parse_pta(&text, None).unwrap();
                assert_eq!(parse_pta(&print_pta(&a), None).unwrap(), a, "{name}");
            }
            Some("mts") => {
                let m = parse_mts(&text, None).unwrap();
                assert_eq!(parse_mts(&print_mts(&m), None).unwrap(), m, "{name}");
            }
            Some("ppn") => {
                let n = parse_ppn(&text, None).unwrap();
                assert_eq!(parse_ppn(&print_ppn(&n), None).unwrap(), n, "{name}");
            }
            Some("pimc") => {
                let p = parse_pimc(&text, None).unwrap();
                assert_eq!(parse_pimc(&print_pimc(&p), None).unwrap(), p, "{name}");
                if let Ok(i) = parse_imc(&text, None) {
                    assert_eq!(parse_imc(&print_imc(&i), None).unwrap(), i, "{name}");
                }
                if let Ok(mc) = parse_mc(&text, None) {
                    assert_eq!(parse_mc(&print_mc(&mc), None).unwrap(), mc, "{name}");
                }
            }
            _ => continue,
        }
        seen += 1;
    }
    assert!(seen >= 8);
}

#[test]
fn empty_inputs_fail_at_the_start() {
    for e in [
        parse_err(parse_pta("", None)),
        parse_err(parse_pimc("", None)),
        parse_err(parse_mts("", None)),
        parse_err(parse_ppn("", None)),
    ] {
        assert_eq!((e.span.line, e.span.column), (1, 1), "{e}");
        assert!(!e.message.is_empty());
    }
}

/// The span must cover a character of `token` inside `text`.
fn points_into(text: &str, e: &ParseError, token: &str) {
    let line = text.lines().nth(e.span.line - 1).unwrap();
    let start = line.rfind(token).unwrap() + 1;
    let end = start + token.len();
    assert!(e.span.column >= start && e.span.column < end, "{e} vs `{token}` in `{line}`");
    assert!(e.span.length >= 1);
}

#[test]
fn error_spans_point_at_the_offending_token() {
    let text = "clocks x;\nloc l0 invariant x <= ;\ninit l0;";
    points_into(text, &parse_err(parse_pta(text, None)), ";");
    let text = "clocks x;\nloc l0;\nbogus l0;";
    points_into(text, &parse_err(parse_pta(text, None)), "bogus");
    let text = "params q;\nstate s0;\nstate s1;\ntrans s0 -> s1 [0.3, r];";
    points_into(text, &parse_err(parse_pimc(text, None)), "r");
    let text = "place p;\ntrans t pre {q: 1};";
    points_into(text, &parse_err(parse_ppn(text, None)), "q");
    let text = "ef-synth {done} {idle}";
    points_into(text, &parse_pta_query(text).unwrap_err(), "{idle}");
    let text = "E[{}] X p";
    points_into(text, &parse_mts_query(text).unwrap_err(), "{");
}

#[test]
fn semantic_errors_are_listed_together() {
    let text = "clocks x;\nloc l0;\ninit nowhere;\nedge l0 -> gone sync a;";
    match parse_pta(text, None) {
        Err(ModelError::Semantic(problems)) => assert!(problems.len() >= 2, "{problems:?}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn decimals_are_exact() {
    let p = parse_pimc("params q;\nstate s0;\nstate s1;\ntrans s0 -> s1 [0.3, q];\ntrans s1 -> s1 1;", None).unwrap();
    let iv = &p.transitions(0).iter().find(|(t, _)| *t == 1).unwrap().1;
    assert_eq!(iv.low, Endpoint::Num(ratio(3, 10)));
    assert_eq!(iv.up, Endpoint::Param("q".into()));
    assert_eq!(json::rational(&ratio(3, 10)), serde_json::json!("3/10"));
    assert!(print_pimc(&p).contains("3/10"));
}

#[test]
fn synthesis_result_json() {
    let a = parse_pta(&corpus("coffee.pta"), None).unwrap();
    let done = a.locations_named(&["done".into()]).unwrap();
    let (s, _) = ef_synthesis(&a, &done, Limits::default()).unwrap();
    let v = json::constraint_set(&s);
    assert_eq!(v["disjuncts"].as_array().unwrap().len(), 1);
    let back = json::read_constraint_set(&v, a.params()).unwrap();
    assert!(back.equivalent(&s).unwrap());
    let text = json::render(&json::envelope("pta", "ef-synth {done}", "set", v.clone()));
    assert!(text.contains("\"schema\": \"paraverse/1\""));
    assert_eq!(json::parse(&text).unwrap()["result"], v);
    let empty = ConstraintSet::empty(vec![Var::param("p")]);
    assert_eq!(serde_json::to_string(&json::constraint_set(&empty)).unwrap(), r#"{"disjuncts":[]}"#);
}

#[test]
fn valuation_function_json() {
    let m = parse_mts(&corpus("robot.mts"), None).unwrap();
    let phi = parse_mts_query("E[Y] G (E[Z] F safe)").unwrap();
    let f = synthesize(&m, &phi).unwrap();
    let v = json::state_val_fun(&m, &f);
    let first = &v["states"][0];
    assert_eq!(first["state"], "s0");
    // every valuation maps each variable to a sorted list of actions
    for val in first["valuations"].as_array().unwrap() {
        for x in ["Y", "Z"] {
            let acts: Vec<&str> = val[x].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
            let order: Vec<usize> = acts.iter().map(|a| m.action_index(a).unwrap()).collect();
            assert!(order.windows(2).all(|w| w[0] < w[1]));
        }
    }
    assert_eq!(json::read_state_val_fun(&m, &v).unwrap(), f);
}

#[test]
fn km_summary_json() {
    let n = parse_ppn("place p; place q init 1; trans t pre {q: 1} post {p: 1, q: 1};", None)
        .unwrap()
        .instantiate(&Default::default())
        .unwrap();
    let s = KmSummary::new(n.places(), &km_analyze(&n));
    let v = s.to_json();
    assert_eq!(v["place_bounds"], serde_json::json!(["omega", 1]));
    assert_eq!(KmSummary::from_json(&v).unwrap(), s);
}

#[test]
fn json_output_is_deterministic() {
    let a = parse_pta(&corpus("coffee.pta"), None).unwrap();
    let done = a.locations_named(&["done".into()]).unwrap();
    let render = || {
        let (s, _) = ef_synthesis(&a, &done, Limits::default()).unwrap();
        json::render(&json::constraint_set(&s))
    };
    assert_eq!(render(), render());
}
