//! Composition expressions.
//!
//! ```text
//! expr := par
//! par  := cat ("|" cat)*
//! cat  := atom (";" atom)*
//! atom := IDENT | "(" expr ")"
//! ```
//!
//! `;` is concatenation and binds tighter than `|`, parallelisation. Both are
//! left-associative. An identifier is any run of characters other than
//! whitespace, `;`, `|`, `(`, `)` and `#`.

use super::ParseDiagnostic;
use crate::algebra::CompositionExpr;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Ident(String),
    Semi,
    Bar,
    Open,
    Close,
    Invalid(char),
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    line: usize,
    column: usize,
}

fn is_ident_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, ';' | '|' | '(' | ')' | '#')
}

fn lex(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for (line_index, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, column) = (line_index + 1, i + 1);
            let kind = match c {
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                ';' => Kind::Semi,
                '|' => Kind::Bar,
                '(' => Kind::Open,
                ')' => Kind::Close,
                '#' => Kind::Invalid(c),
                _ => {
                    let start = i;
                    while i < chars.len() && is_ident_char(chars[i]) {
                        i += 1;
                    }
                    tokens.push(Token {
                        kind: Kind::Ident(chars[start..i].iter().collect()),
                        line,
                        column,
                    });
                    continue;
                }
            };
            tokens.push(Token { kind, line, column });
            i += 1;
        }
    }
    tokens
}

struct Parser {
    tokens: Vec<Token>,
    cursor: usize,
    end: (usize, usize),
}

type Parsed<T> = std::result::Result<T, ParseDiagnostic>;

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn error(&self, code: &'static str, message: impl Into<String>) -> ParseDiagnostic {
        let (line, column) = self.here();
        ParseDiagnostic::new(line, column, code, message)
    }

    fn eat(&mut self, kind: &Kind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.cursor += 1;
            true
        } else {
            false
        }
    }

    fn par(&mut self) -> Parsed<CompositionExpr> {
        let mut left = self.cat()?;
        while self.eat(&Kind::Bar) {
            left = CompositionExpr::parallel(left, self.cat()?);
        }
        Ok(left)
    }

    fn cat(&mut self) -> Parsed<CompositionExpr> {
        let mut left = self.atom()?;
        while self.eat(&Kind::Semi) {
            left = CompositionExpr::concat(left, self.atom()?);
        }
        Ok(left)
    }

    fn atom(&mut self) -> Parsed<CompositionExpr> {
        let Some(token) = self.peek().cloned() else {
            return Err(self.error("expected-operand", "expected a device name or `(`"));
        };
        match token.kind {
            Kind::Ident(name) => {
                self.cursor += 1;
                Ok(CompositionExpr::Device(name))
            }
            Kind::Open => {
                self.cursor += 1;
                let inner = self.par()?;
                if self.eat(&Kind::Close) {
                    Ok(inner)
                } else {
                    Err(ParseDiagnostic::new(
                        token.line,
                        token.column,
                        "unbalanced-paren",
                        "this `(` is never closed",
                    ))
                }
            }
            Kind::Invalid(c) => Err(self.error("invalid-character", format!("unexpected `{c}`"))),
            _ => Err(self.error("expected-operand", "expected a device name or `(`")),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<CompositionExpr> {
    let tokens = lex(text);
    let end = match text.lines().enumerate().last() {
        Some((i, line)) => (i + 1, line.chars().count() + 1),
        None => (1, 1),
    };
    if tokens.is_empty() {
        return Err(Error::Parse(vec![ParseDiagnostic::new(
            1,
            1,
            "empty-input",
            "the expression is empty",
        )]));
    }
    let mut parser = Parser {
        tokens,
        cursor: 0,
        end,
    };
    let result = parser.par().and_then(|e| match parser.peek().map(|t| &t.kind) {
        None => Ok(e),
        Some(Kind::Close) => Err(parser.error("unbalanced-paren", "`)` without a matching `(`")),
        Some(Kind::Invalid(c)) => Err(parser.error("invalid-character", format!("unexpected `{c}`"))),
        Some(_) => Err(parser.error("expected-operator", "expected `;`, `|` or the end")),
    });
    result.map_err(|d| Error::Parse(vec![d]))
}

/// Text form with the fewest parentheses that parses back to `e`.
pub fn render_expression(e: &CompositionExpr) -> String {
    e.to_string()
}
