use std::fmt::Write as _;
use std::sync::Arc;

use crate::ppn::{Ppn, Weight};

use super::lexer::{ParseError, SourceSpan, TokenKind};
use super::parser::Parser;
use super::ModelError;

fn weight(p: &mut Parser, params: &[String]) -> Result<Weight, ParseError> {
    if p.peek().kind == TokenKind::Ident {
        let t = p.next();
        if !params.contains(&t.text) {
            return Err(Parser::error_at(&t.span, format!("undeclared parameter `{}`", t.text)));
        }
        return Ok(Weight::Param(t.text));
    }
    Ok(Weight::Num(p.natural()?.0))
}

type RawArcs = Vec<(String, SourceSpan, Weight)>;

fn arcs(p: &mut Parser, params: &[String]) -> Result<RawArcs, ParseError> {
    p.expect_sym("{")?;
    let mut out = Vec::new();
    if p.eat_sym("}") {
        return Ok(out);
    }
    loop {
        let place = p.expect_ident()?;
        p.expect_sym(":")?;
        out.push((place.text, place.span, weight(p, params)?));
        if p.eat_sym("}") {
            return Ok(out);
        }
        p.expect_sym(",")?;
    }
}

/// Parses the `.ppn` format.
pub fn parse_ppn(text: &str, file: Option<Arc<str>>) -> Result<Ppn, ModelError> {
    let mut p = Parser::new(text, file)?;
    if p.at_eof() {
        return Err(p.error_here("empty model", Some("`place`")).into());
    }
    let mut params: Vec<String> = Vec::new();
    let mut places: Vec<String> = Vec::new();
    let mut initial: Vec<Weight> = Vec::new();
    let mut transitions: Vec<String> = Vec::new();
    let mut raw: Vec<(RawArcs, RawArcs)> = Vec::new();
    while !p.at_eof() {
        let kw = p.expect_ident()?;
        match kw.text.as_str() {
            "params" => params.extend(p.ident_list_until_semi()?.into_iter().map(|t| t.text)),
            "place" => {
                let name = p.expect_ident()?;
                let w = if p.eat_word("init") {
                    weight(&mut p, &params)?
                } else {
                    Weight::Num(0)
                };
                p.expect_sym(";")?;
                if places.contains(&name.text) {
                    return Err(
                        Parser::error_at(&name.span, format!("duplicate place `{}`", name.text)).into()
                    );
                }
                places.push(name.text);
                initial.push(w);
            }
            "trans" => {
                let name = p.expect_ident()?;
                let pre = if p.eat_word("pre") { arcs(&mut p, &params)? } else { Vec::new() };
                let post = if p.eat_word("post") { arcs(&mut p, &params)? } else { Vec::new() };
                p.expect_sym(";")?;
                transitions.push(name.text);
                raw.push((pre, post));
            }
            _ => {
                return Err(
                    Parser::error_at(&kw.span, format!("unknown declaration `{}`", kw.text)).into()
                )
            }
        }
    }
    let row = |list: &RawArcs| -> Result<Vec<Weight>, ModelError> {
        let mut r = vec![Weight::Num(0); places.len()];
        for (name, span, w) in list {
            let i = places
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| Parser::error_at(span, format!("unknown place `{name}`")))?;
            r[i] = w.clone();
        }
        Ok(r)
    };
    let mut pre = Vec::new();
    let mut post = Vec::new();
    for (a, b) in &raw {
        pre.push(row(a)?);
        post.push(row(b)?);
    }
    Ok(Ppn::new(places, transitions, params, pre, post, initial)?)
}

pub fn print_ppn(n: &Ppn) -> String {
    let mut out = String::new();
    if !n.params().is_empty() {
        let _ = writeln!(out, "params {};", n.params().join(" "));
    }
    for (p, w) in n.places().iter().zip(n.initial()) {
        if *w == Weight::Num(0) {
            let _ = writeln!(out, "place {p};");
        } else {
            let _ = writeln!(out, "place {p} init {w};");
        }
    }
    let list = |row: &[Weight]| {
        let parts: Vec<String> = n.arcs(row).map(|(p, w)| format!("{p}: {w}")).collect();
        format!("{{{}}}", parts.join(", "))
    };
    for (t, name) in n.transitions().iter().enumerate() {
        let _ = writeln!(out, "trans {name} pre {} post {};", list(n.pre(t)), list(n.post(t)));
    }
    out
}
