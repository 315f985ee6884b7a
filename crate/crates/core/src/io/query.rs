//! Query languages, one per formalism. Names are resolved against a model
//! by the caller.

use crate::constraint::Valuation;
use crate::mts::Formula;

use super::lexer::{ParseError, TokenKind};
use super::parser::Parser;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PtaQuery {
    EfSynth(Vec<String>),
    Reach { at: Valuation, targets: Vec<String> },
    LuEmptiness(Vec<String>),
    IpCheck,
    /// An empty valuation is fine for parameter-free automata.
    EcCheck(Valuation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PimcQuery {
    ConsistencySynth,
    Consistent(Option<Valuation>),
    NConsistent { state: String, n: usize },
    /// Path of a Markov chain file.
    SatisfiedBy(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PpnMode {
    Exists,
    Forall,
    At(Valuation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PpnProperty {
    Cover(Vec<(String, u64)>),
    Reach(Vec<(String, u64)>),
    Bounded,
    Simultaneous(Vec<String>),
    /// Karp–Miller summary.
    Km,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpnQuery {
    pub mode: PpnMode,
    pub property: PpnProperty,
}

fn names(p: &mut Parser) -> Result<Vec<String>, ParseError> {
    let set = p.ident_set()?;
    if set.is_empty() {
        return Err(p.error_here("the target set is empty", Some("a name")));
    }
    Ok(set.into_iter().map(|t| t.text).collect())
}

/// `(p1 = 1, p2 = 5/2)`, optionally written `v(...)`.
fn valuation(p: &mut Parser) -> Result<Valuation, ParseError> {
    if p.is_word("v") && p.peek_at(1).kind == TokenKind::Sym && p.peek_at(1).text == "(" {
        p.next();
    }
    p.expect_sym("(")?;
    let mut v = Valuation::new();
    if p.eat_sym(")") {
        return Ok(v);
    }
    loop {
        let name = p.expect_ident()?;
        p.expect_sym("=")?;
        let (value, _) = p.rational()?;
        if v.contains(&name.text) {
            return Err(Parser::error_at(&name.span, format!("`{}` is given twice", name.text)));
        }
        v.set(name.text, value);
        if p.eat_sym(")") {
            return Ok(v);
        }
        p.expect_sym(",")?;
    }
}

fn command(p: &mut Parser, known: &str) -> Result<String, ParseError> {
    if p.at_eof() {
        return Err(p.error_here("empty query", Some(known)));
    }
    Ok(p.hyphenated_word()?.text)
}

pub fn parse_pta_query(text: &str) -> Result<PtaQuery, ParseError> {
    let mut p = Parser::new(text, None)?;
    let start = p.peek().span.clone();
    let known = "`ef-synth`, `reach`, `lu-emptiness`, `ip-check` or `ec-check`";
    let q = match command(&mut p, known)?.as_str() {
        "ef-synth" => PtaQuery::EfSynth(names(&mut p)?),
        "reach" => {
            p.expect_word("at")?;
            let at = valuation(&mut p)?;
            PtaQuery::Reach { at, targets: names(&mut p)? }
        }
        "lu-emptiness" => PtaQuery::LuEmptiness(names(&mut p)?),
        "ip-check" => PtaQuery::IpCheck,
        "ec-check" => {
            if p.eat_word("at") {
                PtaQuery::EcCheck(valuation(&mut p)?)
            } else {
                PtaQuery::EcCheck(Valuation::new())
            }
        }
        other => {
            return Err(ParseError {
                span: start,
                message: format!("unknown query `{other}`"),
                expected: Some(known.into()),
            })
        }
    };
    p.expect_eof()?;
    Ok(q)
}

pub fn parse_pimc_query(text: &str) -> Result<PimcQuery, ParseError> {
    let trimmed = text.trim_start();
    if let Some(rest) = trimmed.strip_prefix("satisfied-by") {
        let path = rest.trim();
        if path.is_empty() || rest.len() == rest.trim_start().len() {
            let mut p = Parser::new(text, None)?;
            p.hyphenated_word()?;
            return Err(p.error_here("expected the path of a Markov chain file", Some("a path")));
        }
        return Ok(PimcQuery::SatisfiedBy(path.to_string()));
    }
    let mut p = Parser::new(text, None)?;
    let start = p.peek().span.clone();
    let known = "`consistency-synth`, `consistent`, `n-consistent` or `satisfied-by`";
    let q = match command(&mut p, known)?.as_str() {
        "consistency-synth" => PimcQuery::ConsistencySynth,
        "consistent" => {
            if p.eat_word("at") {
                PimcQuery::Consistent(Some(valuation(&mut p)?))
            } else {
                PimcQuery::Consistent(None)
            }
        }
        "n-consistent" => {
            let state = p.expect_ident()?.text;
            let (n, span) = p.natural()?;
            let n = usize::try_from(n).map_err(|_| Parser::error_at(&span, "number out of range"))?;
            PimcQuery::NConsistent { state, n }
        }
        other => {
            return Err(ParseError {
                span: start,
                message: format!("unknown query `{other}`"),
                expected: Some(known.into()),
            })
        }
    };
    p.expect_eof()?;
    Ok(q)
}

/// A single formula, in the grammar of [`super::parse_formula`].
pub fn parse_mts_query(text: &str) -> Result<Formula, ParseError> {
    super::parse_formula(text)
}

fn marking(p: &mut Parser) -> Result<Vec<(String, u64)>, ParseError> {
    p.expect_sym("{")?;
    let mut out = Vec::new();
    if p.eat_sym("}") {
        return Ok(out);
    }
    loop {
        let place = p.expect_ident()?;
        p.expect_sym(":")?;
        let (n, _) = p.natural()?;
        if out.iter().any(|(q, _)| *q == place.text) {
            return Err(Parser::error_at(&place.span, format!("`{}` is given twice", place.text)));
        }
        out.push((place.text, n));
        if p.eat_sym("}") {
            return Ok(out);
        }
        p.expect_sym(",")?;
    }
}

/// `[exists | forall | at (..)] (cover {..} | reach {..} | bounded | simultaneous {..} | km)`;
/// the mode defaults to `exists`.
pub fn parse_ppn_query(text: &str) -> Result<PpnQuery, ParseError> {
    let mut p = Parser::new(text, None)?;
    let known = "`cover`, `reach`, `bounded`, `simultaneous` or `km`";
    if p.at_eof() {
        return Err(p.error_here("empty query", Some(known)));
    }
    let mode = if p.eat_word("exists") {
        PpnMode::Exists
    } else if p.eat_word("forall") {
        PpnMode::Forall
    } else if p.eat_word("at") {
        PpnMode::At(valuation(&mut p)?)
    } else {
        PpnMode::Exists
    };
    let word = p.expect_ident().map_err(|mut e| {
        e.expected = Some(known.into());
        e
    })?;
    let property = match word.text.as_str() {
        "cover" => PpnProperty::Cover(marking(&mut p)?),
        "reach" => PpnProperty::Reach(marking(&mut p)?),
        "bounded" => PpnProperty::Bounded,
        "simultaneous" => PpnProperty::Simultaneous(names(&mut p)?),
        "km" => PpnProperty::Km,
        other => {
            return Err(ParseError {
                span: word.span,
                message: format!("unknown property `{other}`"),
                expected: Some(known.into()),
            })
        }
    };
    p.expect_eof()?;
    Ok(PpnQuery { mode, property })
}
