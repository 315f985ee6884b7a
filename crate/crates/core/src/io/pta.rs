use std::fmt::Write as _;
use std::sync::Arc;

use crate::constraint::{render, Var};
use crate::pta::{Pta, PtaBuilder};

use super::parser::Parser;
use super::ModelError;

/// Parses the `.pta` format.
pub fn parse_pta(text: &str, file: Option<Arc<str>>) -> Result<Pta, ModelError> {
    let mut p = Parser::new(text, file)?;
    if p.at_eof() {
        return Err(p.error_here("empty model", Some("`clocks`")).into());
    }
    let mut clocks: Vec<String> = Vec::new();
    let mut params: Vec<String> = Vec::new();
    let mut b: Option<PtaBuilder> = None;
    let mut bounds = Vec::new();
    while !p.at_eof() {
        let kw = p.expect_ident()?;
        match kw.text.as_str() {
            "clocks" | "params" => {
                if b.is_some() {
                    return Err(Parser::error_at(
                        &kw.span,
                        format!("`{}` must come before locations and edges", kw.text),
                    )
                    .into());
                }
                let names = p.ident_list_until_semi()?;
                let target = if kw.text == "clocks" { &mut clocks } else { &mut params };
                target.extend(names.into_iter().map(|t| t.text));
            }
            "loc" => {
                let builder = b.get_or_insert_with(|| PtaBuilder::new(&clocks, &params));
                let name = p.expect_ident()?;
                let ctx = builder.context();
                let inv = if p.eat_word("invariant") {
                    Some(p.constraint(&ctx)?)
                } else {
                    None
                };
                p.expect_sym(";")?;
                builder.location(&name.text, inv);
            }
            "init" => {
                let builder = b.get_or_insert_with(|| PtaBuilder::new(&clocks, &params));
                let name = p.expect_ident()?;
                p.expect_sym(";")?;
                builder.initial(&name.text);
            }
            "accepting" => {
                let builder = b.get_or_insert_with(|| PtaBuilder::new(&clocks, &params));
                for t in p.ident_list_until_semi()? {
                    builder.accepting(&t.text);
                }
            }
            "edge" => {
                let builder = b.get_or_insert_with(|| PtaBuilder::new(&clocks, &params));
                let ctx = builder.context();
                let src = p.expect_ident()?;
                p.expect_sym("->")?;
                let tgt = p.expect_ident()?;
                let action = if p.eat_word("sync") {
                    p.expect_ident()?.text
                } else {
                    "tau".to_string()
                };
                let guard = if p.eat_word("guard") {
                    Some(p.constraint(&ctx)?)
                } else {
                    None
                };
                let resets: Vec<String> = if p.eat_word("reset") {
                    p.ident_set()?.into_iter().map(|t| t.text).collect()
                } else {
                    Vec::new()
                };
                p.expect_sym(";")?;
                let refs: Vec<&str> = resets.iter().map(String::as_str).collect();
                builder.edge(&src.text, &tgt.text, &action, guard, &refs);
            }
            "bound" => {
                let name = p.expect_ident()?;
                p.expect_sym("[")?;
                let (lo, _) = p.rational()?;
                p.expect_sym(",")?;
                let (hi, _) = p.rational()?;
                p.expect_sym("]")?;
                p.expect_sym(";")?;
                bounds.push((name.text, lo, hi));
            }
            _ => {
                return Err(Parser::error_at(
                    &kw.span,
                    format!("unknown declaration `{}`", kw.text),
                )
                .into())
            }
        }
    }
    let mut builder = b.unwrap_or_else(|| PtaBuilder::new(&clocks, &params));
    for (name, lo, hi) in bounds {
        builder.bound(&name, lo, hi);
    }
    Ok(builder.build()?)
}

fn names(vs: &[Var]) -> String {
    vs.iter().map(|v| v.name()).collect::<Vec<_>>().join(" ")
}

/// Renders a model in the `.pta` format.
pub fn print_pta(pta: &Pta) -> String {
    let mut out = String::new();
    if !pta.clocks().is_empty() {
        let _ = writeln!(out, "clocks {};", names(pta.clocks()));
    }
    if !pta.params().is_empty() {
        let _ = writeln!(out, "params {};", names(pta.params()));
    }
    for (p, (lo, hi)) in pta.bounds() {
        let _ = writeln!(out, "bound {} [{}, {}];", p, render(lo), render(hi));
    }
    for (i, l) in pta.locations().iter().enumerate() {
        let inv = pta.invariant(i);
        if inv.is_trivially_true() {
            let _ = writeln!(out, "loc {l};");
        } else {
            let _ = writeln!(out, "loc {l} invariant {inv};");
        }
    }
    let _ = writeln!(out, "init {};", pta.location_name(pta.initial()));
    if !pta.accepting().is_empty() {
        let acc: Vec<&str> = pta.accepting().iter().map(|l| pta.location_name(*l)).collect();
        let _ = writeln!(out, "accepting {};", acc.join(" "));
    }
    for e in pta.edges() {
        let _ = write!(
            out,
            "edge {} -> {} sync {}",
            pta.location_name(e.source),
            pta.location_name(e.target),
            e.action
        );
        if !e.guard.is_trivially_true() {
            let _ = write!(out, " guard {}", e.guard);
        }
        if !e.resets.is_empty() {
            let rs: Vec<&str> = e.resets.iter().map(|v| v.name()).collect();
            let _ = write!(out, " reset {{{}}}", rs.join(", "));
        }
        out.push_str(";\n");
    }
    out
}
