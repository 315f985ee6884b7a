use std::fmt;
use std::sync::Arc;

/// Location of a token in its source, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Option<Arc<str>>,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(name) => write!(f, "{}:{}:{}", name, self.line, self.column),
            None => write!(f, "{}:{}", self.line, self.column),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {message}{}", expected.as_ref().map(|e| format!(" (expected {e})")).unwrap_or_default())]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Number,
    Sym,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
    /// Byte offsets in the source, used to detect adjacency.
    pub start: usize,
    pub end: usize,
}

const SYMBOLS: &[&str] = &[
    "->", "<=", ">=", "==", "&&", "||", "<", ">", "=", "+", "-", "*", "/", ";", ",", ":", "{",
    "}", "(", ")", "[", "]", "!", "|", "&",
];

pub fn tokenize(src: &str, file: Option<Arc<str>>) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    let span = |line: usize, col: usize, len: usize| SourceSpan {
        file: file.clone(),
        line,
        column: col,
        length: len,
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Ident,
                text: src[start..i].to_string(),
                span: span(line, col, i - start),
                start,
                end: i,
            });
            col += i - start;
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).map_or(false, |b| b.is_ascii_digit())) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            tokens.push(Token {
                kind: TokenKind::Number,
                text: src[start..i].to_string(),
                span: span(line, col, i - start),
                start,
                end: i,
            });
            col += i - start;
            continue;
        }
        let rest = &src[i..];
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                i += s.len();
                tokens.push(Token {
                    kind: TokenKind::Sym,
                    text: s.to_string(),
                    span: span(line, col, s.len()),
                    start,
                    end: i,
                });
                col += s.len();
            }
            None => {
                let ch = rest.chars().next().unwrap_or('?');
                return Err(ParseError {
                    span: span(line, col, ch.len_utf8()),
                    message: format!("unexpected character `{ch}`"),
                    expected: None,
                });
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        text: String::new(),
        span: span(line, col, 1),
        start: bytes.len(),
        end: bytes.len(),
    });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_are_one_based() {
        let toks = tokenize("clocks x1;\n  loc", None).unwrap();
        assert_eq!(toks[0].span.line, 1);
        assert_eq!(toks[0].span.column, 1);
        assert_eq!(toks[3].text, "loc");
        assert_eq!(toks[3].span.line, 2);
        assert_eq!(toks[3].span.column, 3);
    }

    #[test]
    fn comments_and_decimals() {
        let toks = tokenize("0.3 # trailing\n3/10", None).unwrap();
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, vec!["0.3", "3", "/", "10", ""]);
    }

    #[test]
    fn unknown_character_reports_position() {
        let err = tokenize("x $", None).unwrap_err();
        assert_eq!(err.span.column, 3);
    }
}
