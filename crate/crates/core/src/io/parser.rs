//! Token cursor shared by the model and query parsers, plus the linear
//! constraint sub-grammar.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::lexer::{tokenize, ParseError, SourceSpan, Token, TokenKind};
use crate::constraint::{
    parse_rational, AtomicConstraint, ConvexConstraint, LinearTerm, Rational, Rel, Var,
};

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(src: &str, file: Option<Arc<str>>) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: tokenize(src, file)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn peek_at(&self, k: usize) -> &Token {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i]
    }

    pub fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    pub fn is_sym(&self, s: &str) -> bool {
        let t = self.peek();
        t.kind == TokenKind::Sym && t.text == s
    }

    pub fn is_word(&self, w: &str) -> bool {
        let t = self.peek();
        t.kind == TokenKind::Ident && t.text == w
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn error_here(&self, message: impl Into<String>, expected: Option<&str>) -> ParseError {
        ParseError {
            span: self.peek().span.clone(),
            message: message.into(),
            expected: expected.map(str::to_string),
        }
    }

    pub fn error_at(span: &SourceSpan, message: impl Into<String>) -> ParseError {
        ParseError {
            span: span.clone(),
            message: message.into(),
            expected: None,
        }
    }

    fn describe(t: &Token) -> String {
        match t.kind {
            TokenKind::Eof => "end of input".to_string(),
            _ => format!("`{}`", t.text),
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<Token, ParseError> {
        if self.is_sym(s) {
            Ok(self.next())
        } else {
            let found = Self::describe(self.peek());
            Err(self.error_here(format!("unexpected {found}"), Some(&format!("`{s}`"))))
        }
    }

    pub fn expect_word(&mut self, w: &str) -> Result<Token, ParseError> {
        if self.is_word(w) {
            Ok(self.next())
        } else {
            let found = Self::describe(self.peek());
            Err(self.error_here(format!("unexpected {found}"), Some(&format!("`{w}`"))))
        }
    }

    pub fn expect_ident(&mut self) -> Result<Token, ParseError> {
        if self.peek().kind == TokenKind::Ident {
            Ok(self.next())
        } else {
            let found = Self::describe(self.peek());
            Err(self.error_here(format!("unexpected {found}"), Some("identifier")))
        }
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            let found = Self::describe(self.peek());
            Err(self.error_here(format!("unexpected {found}"), Some("end of input")))
        }
    }

    /// An identifier possibly joined with adjacent `-ident` parts (`ef-synth`).
    pub fn hyphenated_word(&mut self) -> Result<Token, ParseError> {
        let mut tok = self.expect_ident()?;
        loop {
            let dash = self.peek_at(0);
            let word = self.peek_at(1);
            if dash.kind == TokenKind::Sym
                && dash.text == "-"
                && dash.start == tok.end
                && word.kind == TokenKind::Ident
                && word.start == dash.end
            {
                let word = word.clone();
                self.pos += 2;
                tok.text = format!("{}-{}", tok.text, word.text);
                tok.span.length = word.end - tok.start;
                tok.end = word.end;
            } else {
                return Ok(tok);
            }
        }
    }

    /// `{a, b, c}` (possibly empty).
    pub fn ident_set(&mut self) -> Result<Vec<Token>, ParseError> {
        self.expect_sym("{")?;
        let mut out = Vec::new();
        if self.eat_sym("}") {
            return Ok(out);
        }
        loop {
            out.push(self.expect_ident()?);
            if self.eat_sym("}") {
                return Ok(out);
            }
            self.expect_sym(",")?;
        }
    }

    /// Identifiers up to `;`.
    pub fn ident_list_until_semi(&mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        while !self.is_sym(";") {
            out.push(self.expect_ident()?);
            self.eat_sym(",");
        }
        self.expect_sym(";")?;
        Ok(out)
    }

    /// A rational literal: `3`, `0.25`, `3/10`, optionally negated.
    pub fn rational(&mut self) -> Result<(Rational, SourceSpan), ParseError> {
        let neg = self.eat_sym("-");
        let t = self.peek().clone();
        if t.kind != TokenKind::Number {
            let found = Self::describe(&t);
            return Err(self.error_here(format!("unexpected {found}"), Some("number")));
        }
        self.next();
        let mut text = t.text.clone();
        if self.is_sym("/") && self.peek_at(1).kind == TokenKind::Number {
            self.next();
            let d = self.next();
            text = format!("{}/{}", text, d.text);
        }
        let value = parse_rational(&text)
            .ok_or_else(|| Parser::error_at(&t.span, format!("malformed number `{text}`")))?;
        Ok((if neg { -value } else { value }, t.span))
    }

    pub fn natural(&mut self) -> Result<(u64, SourceSpan), ParseError> {
        let t = self.peek().clone();
        if t.kind != TokenKind::Number || t.text.contains('.') {
            let found = Self::describe(&t);
            return Err(self.error_here(format!("unexpected {found}"), Some("natural number")));
        }
        self.next();
        let n = t
            .text
            .parse()
            .map_err(|_| Parser::error_at(&t.span, "number out of range"))?;
        Ok((n, t.span))
    }

    /// `true`, `false`, or atoms joined by `&&`; chains like `0 <= x <= 3` allowed.
    pub fn constraint(
        &mut self,
        context: &[Var],
    ) -> Result<ConvexConstraint, ParseError> {
        let start_span = self.peek().span.clone();
        let mut atoms = Vec::new();
        loop {
            if self.eat_word("true") {
            } else if self.eat_word("false") {
                atoms.push(AtomicConstraint::falsum());
            } else {
                atoms.extend(self.atom_chain(context)?);
            }
            if !self.eat_sym("&&") {
                break;
            }
        }
        ConvexConstraint::new(context.to_vec(), atoms)
            .map_err(|e| Parser::error_at(&start_span, e.to_string()))
    }

    fn atom_chain(&mut self, context: &[Var]) -> Result<Vec<AtomicConstraint>, ParseError> {
        let mut lhs = self.linear_expr(context)?;
        let mut out = Vec::new();
        loop {
            let t = self.peek().clone();
            let rel = if t.kind == TokenKind::Sym {
                Rel::from_symbol(&t.text)
            } else {
                None
            };
            let Some(rel) = rel else {
                if out.is_empty() {
                    let found = Self::describe(&t);
                    return Err(self.error_here(
                        format!("unexpected {found}"),
                        Some("comparison operator"),
                    ));
                }
                return Ok(out);
            };
            self.next();
            let rhs = self.linear_expr(context)?;
            out.push(scaled_atom(&lhs, rel, &rhs));
            lhs = rhs;
        }
    }

    /// Linear expression with rational coefficients.
    pub fn linear_expr(&mut self, context: &[Var]) -> Result<RatExpr, ParseError> {
        let mut expr = RatExpr::default();
        let mut sign = Rational::one();
        if self.eat_sym("-") {
            sign = -sign;
        } else {
            self.eat_sym("+");
        }
        loop {
            self.linear_factor(context, &sign, &mut expr)?;
            if self.eat_sym("+") {
                sign = Rational::one();
            } else if self.eat_sym("-") {
                sign = -Rational::one();
            } else {
                return Ok(expr);
            }
        }
    }

    fn linear_factor(
        &mut self,
        context: &[Var],
        sign: &Rational,
        expr: &mut RatExpr,
    ) -> Result<(), ParseError> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Number => {
                let (k, _) = self.rational()?;
                if self.eat_sym("*") {
                    let v = self.variable(context)?;
                    expr.add(Some(v), sign * k);
                } else {
                    expr.add(None, sign * k);
                }
                Ok(())
            }
            TokenKind::Ident => {
                let v = self.variable(context)?;
                if self.eat_sym("*") {
                    let (k, _) = self.rational()?;
                    expr.add(Some(v), sign * k);
                } else {
                    expr.add(Some(v), sign.clone());
                }
                Ok(())
            }
            _ => {
                let found = Self::describe(&t);
                Err(self.error_here(format!("unexpected {found}"), Some("term")))
            }
        }
    }

    fn variable(&mut self, context: &[Var]) -> Result<Var, ParseError> {
        let t = self.expect_ident()?;
        context
            .iter()
            .find(|v| v.name() == t.text)
            .cloned()
            .ok_or_else(|| Parser::error_at(&t.span, format!("unknown variable `{}`", t.text)))
    }
}

/// Linear expression with rational coefficients, before scaling.
#[derive(Debug, Clone, Default)]
pub struct RatExpr {
    pub coeffs: BTreeMap<Var, Rational>,
    pub constant: Rational,
}

impl RatExpr {
    fn add(&mut self, v: Option<Var>, k: Rational) {
        match v {
            None => self.constant += k,
            Some(v) => {
                let e = self.coeffs.entry(v.clone()).or_insert_with(Rational::zero);
                *e += k;
                if e.is_zero() {
                    self.coeffs.remove(&v);
                }
            }
        }
    }
}

/// `lhs ⋈ rhs` with coefficients cleared of denominators.
fn scaled_atom(lhs: &RatExpr, rel: Rel, rhs: &RatExpr) -> AtomicConstraint {
    let mut diff = lhs.clone();
    for (v, k) in &rhs.coeffs {
        diff.add(Some(v.clone()), -k.clone());
    }
    diff.constant -= &rhs.constant;
    AtomicConstraint::new(LinearTerm::from_rational(diff.coeffs, diff.constant), rel)
}

/// Parses a standalone constraint over `context`.
pub fn parse_constraint(text: &str, context: &[Var]) -> Result<ConvexConstraint, ParseError> {
    let mut p = Parser::new(text, None)?;
    let c = p.constraint(context)?;
    p.expect_eof()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use crate::constraint::{int, Valuation};

    fn ctx() -> Vec<Var> {
        vec![Var::clock("x1"), Var::clock("x2"), Var::param("p1"), Var::param("p2")]
    }

    #[test]
    fn chains_and_coefficients() {
        let c = parse_constraint("0 <= x1 <= 10 && 2*p1 <= p2", &ctx()).unwrap();
        assert_eq!(c.atoms().len(), 3);
        let val: Valuation = [("x1", int(3)), ("x2", int(0)), ("p1", int(1)), ("p2", int(2))]
            .into_iter()
            .collect();
        assert!(c.satisfies(&val).unwrap());
    }

    #[test]
    fn rational_coefficients_are_cleared() {
        let c = parse_constraint("x1 <= 1/2*p1 + 0.25", &ctx()).unwrap();
        let a = &c.atoms()[0];
        assert_eq!(a.term.coeff(&Var::param("p1")), BigInt::from(-1));
        assert_eq!(a.term.coeff(&Var::clock("x1")), BigInt::from(2));
    }

    #[test]
    fn unknown_variable_is_reported_at_token() {
        let err = parse_constraint("x1 <= q", &ctx()).unwrap_err();
        assert_eq!(err.span.column, 7);
    }

    #[test]
    fn display_round_trips() {
        let c = parse_constraint("x2 - x1 = p1 && x1 > 1/3 && 3*p2 >= 2", &ctx()).unwrap();
        let again = parse_constraint(&c.to_string(), &ctx()).unwrap();
        assert!(c.equivalent(&again));
    }
}
