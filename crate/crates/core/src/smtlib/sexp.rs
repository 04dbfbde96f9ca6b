use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};

/// A region of the input text. Lines and columns are 1-based; columns
/// count characters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExp {
    Symbol(String, SourceSpan),
    Numeral(BigInt, SourceSpan),
    Str(String, SourceSpan),
    Keyword(String, SourceSpan),
    /// Decimals, hexadecimals and binaries; never part of the supported subset.
    Other(String, SourceSpan),
    List(Vec<SExp>, SourceSpan),
}

impl SExp {
    pub fn span(&self) -> SourceSpan {
        match self {
            SExp::Symbol(_, s)
            | SExp::Numeral(_, s)
            | SExp::Str(_, s)
            | SExp::Keyword(_, s)
            | SExp::Other(_, s)
            | SExp::List(_, s) => *s,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            SExp::Symbol(s, _) => Some(s),
            _ => None,
        }
    }

    pub fn as_numeral(&self) -> Option<&BigInt> {
        match self {
            SExp::Numeral(n, _) => Some(n),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExp]> {
        match self {
            SExp::List(items, _) => Some(items),
            _ => None,
        }
    }

    /// Head symbol of a list, if any.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|l| l.first()).and_then(SExp::as_symbol)
    }

    /// Short description for diagnostics.
    pub fn describe(&self) -> String {
        match self {
            SExp::Symbol(s, _) => format!("symbol `{s}`"),
            SExp::Numeral(n, _) => format!("numeral `{n}`"),
            SExp::Str(s, _) => format!("string {s:?}"),
            SExp::Keyword(k, _) => format!("keyword `{k}`"),
            SExp::Other(t, _) => format!("literal `{t}`"),
            SExp::List(items, _) => match items.first().and_then(SExp::as_symbol) {
                Some(h) => format!("`({h} ...)`"),
                None if items.is_empty() => "`()`".to_string(),
                None => "a list".to_string(),
            },
        }
    }
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn here(&self) -> SourceSpan {
        SourceSpan {
            start: self.pos,
            end: self.pos,
            line: self.line,
            column: self.column,
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn syntax(&self, span: SourceSpan, expected: &str, found: &str) -> Error {
        Error::Syntax {
            span,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    fn expr(&mut self) -> Result<SExp> {
        self.skip_trivia();
        let mut span = self.here();
        let Some(c) = self.peek() else {
            return Err(self.syntax(span, "an expression", "end of input"));
        };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => return Err(self.syntax(self.here(), "`)`", "end of input")),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.expr()?),
                    }
                }
                span.end = self.pos;
                Ok(SExp::List(items, span))
            }
            ')' => Err(self.syntax(span, "an expression", "`)`")),
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.syntax(self.here(), "closing `\"`", "end of input")),
                        Some('"') if self.peek() == Some('"') => {
                            self.bump();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(c) => s.push(c),
                    }
                }
                span.end = self.pos;
                Ok(SExp::Str(s, span))
            }
            '|' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.syntax(self.here(), "closing `|`", "end of input")),
                        Some('|') => break,
                        Some(c) => s.push(c),
                    }
                }
                span.end = self.pos;
                Ok(SExp::Symbol(s, span))
            }
            _ => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' || c == '"' || c == '|' {
                        break;
                    }
                    self.bump();
                }
                span.end = self.pos;
                let tok = &self.text[start..self.pos];
                if tok.bytes().all(|b| b.is_ascii_digit()) {
                    let n: BigInt = tok.parse().expect("digits parse as a numeral");
                    Ok(SExp::Numeral(n, span))
                } else if let Some(k) = tok.strip_prefix(':') {
                    Ok(SExp::Keyword(k.to_string(), span))
                } else if tok.starts_with('#') || tok.as_bytes()[0].is_ascii_digit() {
                    Ok(SExp::Other(tok.to_string(), span))
                } else {
                    Ok(SExp::Symbol(tok.to_string(), span))
                }
            }
        }
    }
}

/// Reads every top-level expression of `text`.
pub fn parse_sexps(text: &str) -> Result<Vec<SExp>> {
    let mut lx = Lexer {
        text,
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        lx.skip_trivia();
        if lx.peek().is_none() {
            return Ok(out);
        }
        out.push(lx.expr()?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let es = parse_sexps("; comment\n(assert (>= x 2))\n|a b| \"q\"\"t\" :named").unwrap();
        assert_eq!(es.len(), 4);
        let SExp::List(items, span) = &es[0] else { panic!() };
        assert_eq!((span.line, span.column), (2, 1));
        assert_eq!(items[0].as_symbol(), Some("assert"));
        let inner = items[1].as_list().unwrap();
        assert_eq!(inner[2].as_numeral(), Some(&BigInt::from(2)));
        assert_eq!(inner[1].span().column, 13);
        assert_eq!(es[1].as_symbol(), Some("a b"));
        assert!(matches!(&es[2], SExp::Str(s, _) if s == "q\"t"));
        assert!(matches!(&es[3], SExp::Keyword(k, _) if k == "named"));
    }

    #[test]
    fn reports_unbalanced_input() {
        let err = parse_sexps("(assert (> x 1)").unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }));
        let err = parse_sexps(")").unwrap_err();
        assert!(err.to_string().starts_with("1:1"));
    }
}
