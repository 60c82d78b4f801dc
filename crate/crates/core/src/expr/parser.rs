//! Recursive-descent parser.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?            right-associative
//! atom    := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! There is no implicit multiplication: `2r` is a syntax error.

use std::fmt;

use super::{BinOp, Func, Node};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String> },
    UnknownIdentifier(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the source.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected } => {
                write!(f, "syntax error at offset {}: expected {}", self.offset, expected.join(" or "))
            }
            ParseErrorKind::UnknownIdentifier(name) => {
                write!(f, "unknown identifier `{}` at offset {}", name, self.offset)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the next token and its starting offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            '0'..='9' | '.' => {
                let len = number_len(rest);
                let text = &rest[..len];
                let value: f64 = text.parse().map_err(|_| syntax(start, &["number"]))?;
                if !value.is_finite() {
                    return Err(syntax(start, &["finite number"]));
                }
                self.pos += len;
                return Ok((Tok::Num(value), start));
            }
            c if c.is_alphabetic() || c == '_' => {
                let len = rest
                    .char_indices()
                    .find(|(_, ch)| !(ch.is_alphanumeric() || *ch == '_'))
                    .map_or(rest.len(), |(i, _)| i);
                self.pos += len;
                return Ok((Tok::Ident(rest[..len].to_string()), start));
            }
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(syntax(start, &["number", "identifier", "operator", "parenthesis"])),
        };
        self.pos += c.len_utf8();
        Ok((tok, start))
    }
}

/// Length of the longest numeric literal prefix: digits, optional fraction,
/// optional exponent (only consumed when followed by digits).
fn number_len(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

fn syntax(offset: usize, expected: &[&str]) -> ParseError {
    ParseError {
        offset,
        kind: ParseErrorKind::Syntax { expected: expected.iter().map(|s| s.to_string()).collect() },
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
    var: &'a str,
}

const OPERAND: &[&str] = &["number", "identifier", "'('", "'-'"];

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Op('^') {
            self.bump()?;
            let exp = self.unary()?;
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Node::Num(v))
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let start = self.at;
                self.bump()?;
                if name == self.var {
                    return Ok(Node::Var);
                }
                if let Some(func) = Func::from_name(&name) {
                    if self.tok != Tok::LParen {
                        return Err(syntax(self.at, &["'('"]));
                    }
                    self.bump()?;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                match name.as_str() {
                    "pi" => Ok(Node::Num(std::f64::consts::PI)),
                    "e" => Ok(Node::Num(std::f64::consts::E)),
                    _ => Err(ParseError { offset: start, kind: ParseErrorKind::UnknownIdentifier(name) }),
                }
            }
            other => {
                self.tok = other;
                Err(syntax(self.at, OPERAND))
            }
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.tok != Tok::RParen {
            return Err(syntax(self.at, &["')'", "operator"]));
        }
        self.bump()
    }
}

pub(super) fn parse(src: &str, var: &str) -> Result<Node, ParseError> {
    let mut p = Parser { lexer: Lexer { src, pos: 0 }, tok: Tok::End, at: 0, var };
    p.bump()?;
    let node = p.expr()?;
    if p.tok != Tok::End {
        return Err(syntax(p.at, &["operator", "end of input"]));
    }
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(src: &str) -> ParseError {
        parse(src, "r").unwrap_err()
    }

    #[test]
    fn dangling_operator_reports_end_offset() {
        let e = err("r + ");
        assert_eq!(e.offset, 4);
        assert!(matches!(e.kind, ParseErrorKind::Syntax { .. }));
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        let e = err("2r");
        assert_eq!(e.offset, 1);
        assert!(matches!(e.kind, ParseErrorKind::Syntax { .. }));
    }

    #[test]
    fn unknown_identifiers() {
        let e = err("1 + foo(r)");
        assert_eq!(e.offset, 4);
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("foo".into()));
        assert_eq!(err("s + 1").kind, ParseErrorKind::UnknownIdentifier("s".into()));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(err("(r + 1").offset, 6);
        assert_eq!(err("sin r").offset, 4);
        assert_eq!(err("r)").offset, 1);
        assert_eq!(err("").offset, 0);
        assert_eq!(err("r # 2").offset, 2);
        assert!(matches!(err("1e999").kind, ParseErrorKind::Syntax { .. }));
    }

    #[test]
    fn whitespace_and_exponents() {
        assert_eq!(parse(" r\t^ 2 ", "r").unwrap(), parse("r^2", "r").unwrap());
        assert_eq!(parse("1.5e2", "r").unwrap(), Node::Num(150.0));
        assert_eq!(parse(".5", "r").unwrap(), Node::Num(0.5));
        // `e` is Euler's number unless it is the variable
        assert_eq!(parse("e", "e").unwrap(), Node::Var);
    }
}
