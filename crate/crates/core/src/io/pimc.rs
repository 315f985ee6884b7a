use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::pimc::{Endpoint, Imc, Mc, ParamInterval, Pimc};

use super::lexer::{SourceSpan, TokenKind};
use super::parser::Parser;
use super::ModelError;

struct RawTrans {
    from: (String, SourceSpan),
    to: (String, SourceSpan),
    interval: ParamInterval,
}

fn endpoint(p: &mut Parser, params: &[String]) -> Result<Endpoint, ModelError> {
    if p.peek().kind == TokenKind::Ident {
        let t = p.next();
        if !params.contains(&t.text) {
            return Err(Parser::error_at(&t.span, format!("undeclared parameter `{}`", t.text)).into());
        }
        return Ok(Endpoint::Param(t.text));
    }
    Ok(Endpoint::Num(p.rational()?.0))
}

/// Parses the `.pimc` format. Intervals are `[low, up]` with numeric or
/// parameter endpoints; a bare number `x` stands for `[x, x]`.
pub fn parse_pimc(text: &str, file: Option<Arc<str>>) -> Result<Pimc, ModelError> {
    let mut p = Parser::new(text, file)?;
    if p.at_eof() {
        return Err(p.error_here("empty model", Some("`state`")).into());
    }
    let mut params: Vec<String> = Vec::new();
    let mut states: Vec<String> = Vec::new();
    let mut labels: Vec<BTreeSet<String>> = Vec::new();
    let mut initial: Option<(String, SourceSpan)> = None;
    let mut trans: Vec<RawTrans> = Vec::new();
    while !p.at_eof() {
        let kw = p.expect_ident()?;
        match kw.text.as_str() {
            "params" => {
                if !states.is_empty() || !trans.is_empty() {
                    return Err(Parser::error_at(&kw.span, "`params` must come first").into());
                }
                params.extend(p.ident_list_until_semi()?.into_iter().map(|t| t.text));
            }
            "state" => {
                let name = p.expect_ident()?;
                let ls = if p.eat_word("labels") {
                    p.ident_set()?.into_iter().map(|t| t.text).collect()
                } else {
                    BTreeSet::new()
                };
                p.expect_sym(";")?;
                if states.contains(&name.text) {
                    return Err(
                        Parser::error_at(&name.span, format!("duplicate state `{}`", name.text)).into()
                    );
                }
                states.push(name.text);
                labels.push(ls);
            }
            "init" => {
                let name = p.expect_ident()?;
                p.expect_sym(";")?;
                initial = Some((name.text, name.span));
            }
            "trans" => {
                let from = p.expect_ident()?;
                p.expect_sym("->")?;
                let to = p.expect_ident()?;
                let interval = if p.eat_sym("[") {
                    let low = endpoint(&mut p, &params)?;
                    p.expect_sym(",")?;
                    let up = endpoint(&mut p, &params)?;
                    p.expect_sym("]")?;
                    ParamInterval { low, up }
                } else {
                    let e = endpoint(&mut p, &params)?;
                    ParamInterval { low: e.clone(), up: e }
                };
                p.expect_sym(";")?;
                trans.push(RawTrans {
                    from: (from.text, from.span),
                    to: (to.text, to.span),
                    interval,
                });
            }
            _ => {
                return Err(
                    Parser::error_at(&kw.span, format!("unknown declaration `{}`", kw.text)).into()
                )
            }
        }
    }
    let index = |(name, span): &(String, SourceSpan)| -> Result<usize, ModelError> {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Parser::error_at(span, format!("unknown state `{name}`")).into())
    };
    let initial = match &initial {
        Some(i) => index(i)?,
        None => 0,
    };
    let mut rows: Vec<Vec<(usize, ParamInterval)>> = vec![Vec::new(); states.len()];
    for t in &trans {
        let (s, u) = (index(&t.from)?, index(&t.to)?);
        rows[s].push((u, t.interval.clone()));
    }
    Ok(Pimc::new(states, initial, labels, params, rows)?)
}

/// A `.pimc` file without parameters.
pub fn parse_imc(text: &str, file: Option<Arc<str>>) -> Result<Imc, ModelError> {
    let pimc = parse_pimc(text, file)?;
    if !pimc.params().is_empty() {
        return Err(ModelError::Semantic(vec!["an IMC cannot declare parameters".into()]));
    }
    Ok(pimc.instantiate(&Default::default())?)
}

/// A `.pimc` file whose transitions are all point probabilities.
pub fn parse_mc(text: &str, file: Option<Arc<str>>) -> Result<Mc, ModelError> {
    let imc = parse_imc(text, file)?;
    let mut problems = Vec::new();
    let rows = (0..imc.states().len())
        .map(|s| {
            imc.transitions(s)
                .iter()
                .map(|(t, iv)| {
                    if iv.low != iv.up {
                        problems.push(format!(
                            "transition {} -> {} is an interval, not a probability",
                            imc.states()[s],
                            imc.states()[*t]
                        ));
                    }
                    (*t, iv.low.clone())
                })
                .collect()
        })
        .collect();
    if !problems.is_empty() {
        return Err(ModelError::Semantic(problems));
    }
    Ok(Mc::new(imc.states().to_vec(), imc.initial(), imc.labels().to_vec(), rows)?)
}

fn write_states(out: &mut String, names: &[String], label: impl Fn(usize) -> Vec<String>) {
    for (i, s) in names.iter().enumerate() {
        let ls = label(i);
        if ls.is_empty() {
            let _ = writeln!(out, "state {s};");
        } else {
            let _ = writeln!(out, "state {s} labels {{{}}};", ls.join(", "));
        }
    }
}

/// Renders a model in the `.pimc` format.
pub fn print_pimc(pimc: &Pimc) -> String {
    let mut out = String::new();
    if !pimc.params().is_empty() {
        let _ = writeln!(out, "params {};", pimc.params().join(" "));
    }
    write_states(&mut out, pimc.states(), |i| pimc.label(i).iter().cloned().collect());
    let _ = writeln!(out, "init {};", pimc.states()[pimc.initial()]);
    for s in 0..pimc.states().len() {
        for (t, iv) in pimc.transitions(s) {
            let _ = writeln!(out, "trans {} -> {} {iv};", pimc.states()[s], pimc.states()[*t]);
        }
    }
    out
}

pub fn print_imc(imc: &Imc) -> String {
    print_pimc(&Pimc::from(imc.clone()))
}

pub fn print_mc(mc: &Mc) -> String {
    let mut out = String::new();
    write_states(&mut out, mc.states(), |i| mc.label(i).iter().cloned().collect());
    let _ = writeln!(out, "init {};", mc.states()[mc.initial()]);
    for s in 0..mc.states().len() {
        for (t, p) in mc.row(s) {
            let _ = writeln!(
                out,
                "trans {} -> {} {};",
                mc.states()[s],
                mc.states()[*t],
                crate::constraint::render(p)
            );
        }
    }
    out
}

