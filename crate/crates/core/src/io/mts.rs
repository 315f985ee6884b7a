use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::mts::{Alpha, Formula, Mts};

use super::lexer::{ParseError, SourceSpan, TokenKind};
use super::parser::Parser;
use super::ModelError;

/// Parses the `.mts` format.
pub fn parse_mts(text: &str, file: Option<Arc<str>>) -> Result<Mts, ModelError> {
    let mut p = Parser::new(text, file)?;
    if p.at_eof() {
        return Err(p.error_here("empty model", Some("`actions`")).into());
    }
    let mut actions: Vec<String> = Vec::new();
    let mut vars: Vec<String> = Vec::new();
    let mut states: Vec<String> = Vec::new();
    let mut labels: Vec<BTreeSet<String>> = Vec::new();
    let mut initial: Option<(String, SourceSpan)> = None;
    let mut raw: Vec<[(String, SourceSpan); 3]> = Vec::new();
    while !p.at_eof() {
        let kw = p.expect_ident()?;
        match kw.text.as_str() {
            "actions" => actions.extend(p.ident_list_until_semi()?.into_iter().map(|t| t.text)),
            "vars" => vars.extend(p.ident_list_until_semi()?.into_iter().map(|t| t.text)),
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
                p.expect_sym("-")?;
                let act = p.expect_ident()?;
                p.expect_sym("->")?;
                let to = p.expect_ident()?;
                p.expect_sym(";")?;
                raw.push([(from.text, from.span), (act.text, act.span), (to.text, to.span)]);
            }
            _ => {
                return Err(
                    Parser::error_at(&kw.span, format!("unknown declaration `{}`", kw.text)).into()
                )
            }
        }
    }
    let find = |names: &[String], (name, span): &(String, SourceSpan), what: &str| {
        names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| ModelError::from(Parser::error_at(span, format!("unknown {what} `{name}`"))))
    };
    let initial = match &initial {
        Some(i) => find(&states, i, "state")?,
        None => 0,
    };
    let mut transitions = Vec::new();
    for [s, a, t] in &raw {
        transitions.push((find(&states, s, "state")?, find(&actions, a, "action")?, find(&states, t, "state")?));
    }
    Ok(Mts::new(states, initial, actions, vars, transitions, labels)?)
}

pub fn print_mts(m: &Mts) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "actions {};", m.actions().join(" "));
    if !m.vars().is_empty() {
        let _ = writeln!(out, "vars {};", m.vars().join(" "));
    }
    for (i, s) in m.states().iter().enumerate() {
        let ls: Vec<&str> = m.label(i).iter().map(String::as_str).collect();
        if ls.is_empty() {
            let _ = writeln!(out, "state {s};");
        } else {
            let _ = writeln!(out, "state {s} labels {{{}}};", ls.join(", "));
        }
    }
    let _ = writeln!(out, "init {};", m.states()[m.initial()]);
    for &(s, a, t) in m.transitions() {
        let _ = writeln!(out, "trans {} -{}-> {};", m.states()[s], m.actions()[a], m.states()[t]);
    }
    out
}

/// Parses a formula: `E[Y] G (E[Z] F safe)`, `E[{left,right}] X p`,
/// `Ew[Y] G p`, `E[Y](a U b)`, with `!`, `&` and `|`.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, None)?;
    if p.at_eof() {
        return Err(p.error_here("empty formula", Some("a formula")));
    }
    let f = formula(&mut p)?;
    p.expect_eof()?;
    Ok(f)
}

pub(crate) fn formula(p: &mut Parser) -> Result<Formula, ParseError> {
    let mut f = conjunction(p)?;
    while p.eat_sym("|") || p.eat_sym("||") {
        f = Formula::or(f, conjunction(p)?);
    }
    Ok(f)
}

fn conjunction(p: &mut Parser) -> Result<Formula, ParseError> {
    let mut f = unary(p)?;
    while p.eat_sym("&") || p.eat_sym("&&") {
        f = Formula::and(f, unary(p)?);
    }
    Ok(f)
}

fn unary(p: &mut Parser) -> Result<Formula, ParseError> {
    if p.eat_sym("!") {
        return Ok(Formula::not(unary(p)?));
    }
    if p.eat_sym("(") {
        let f = formula(p)?;
        p.expect_sym(")")?;
        return Ok(f);
    }
    if p.peek().kind != TokenKind::Ident {
        return Err(p.error_here("expected a formula", Some("a proposition, `!`, `(` or `E[`")));
    }
    let quantifier = p.peek_at(1).kind == TokenKind::Sym
        && p.peek_at(1).text == "["
        && (p.is_word("E") || p.is_word("Ew"));
    if !quantifier {
        let t = p.next();
        return Ok(match t.text.as_str() {
            "true" => Formula::True,
            "false" => Formula::falsum(),
            _ => Formula::Prop(t.text),
        });
    }
    let omega = p.next().text == "Ew";
    p.expect_sym("[")?;
    let alpha = if p.is_sym("{") {
        let open = p.peek().span.clone();
        let set = p.ident_set()?;
        if set.is_empty() {
            return Err(Parser::error_at(&open, "action sets must be nonempty"));
        }
        Alpha::Set(set.into_iter().map(|t| t.text).collect())
    } else {
        Alpha::Var(p.expect_ident()?.text)
    };
    p.expect_sym("]")?;
    if omega {
        p.expect_word("G")?;
        return Ok(Formula::globally_omega(alpha, unary(p)?));
    }
    if p.eat_sym("(") {
        let a = formula(p)?;
        p.expect_word("U")?;
        let b = formula(p)?;
        p.expect_sym(")")?;
        return Ok(Formula::until(alpha, a, b));
    }
    if p.eat_word("X") {
        Ok(Formula::next(alpha, unary(p)?))
    } else if p.eat_word("G") {
        Ok(Formula::globally(alpha, unary(p)?))
    } else if p.eat_word("F") {
        Ok(Formula::eventually(alpha, unary(p)?))
    } else {
        Err(p.error_here("expected a temporal operator", Some("`X`, `G`, `F` or `(`")))
    }
}
