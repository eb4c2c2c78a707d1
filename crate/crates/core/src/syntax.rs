//! Concrete syntax for both worlds.
//!
//! Indexed:
//! ```text
//! term := "\" term | app
//! app  := atom+                                  (left-associative)
//! atom := INDEX | "(" term ")" | atom "[" term "]"
//!       | "?" IDENT "{" INDEX ("," INDEX)* "}" | "?" IDENT "{}"
//! ```
//! Named:
//! ```text
//! term := "\" IDENT "." term | app
//! atom := IDENT | "(" term ")" | atom "[" IDENT ":=" term "]"
//!       | "?" IDENT "{" IDENT-list "}"
//! ```
//! `λ` is accepted wherever `\` is. Printing always emits `\`, and
//! printed forms parse back to the same tree.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::natset::NatSet;
use crate::term::{NamedTerm, Term, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum World {
    Indexed,
    Named,
}

impl std::str::FromStr for World {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "indexed" => Ok(World::Indexed),
            "named" => Ok(World::Named),
            _ => Err(format!("unknown world '{s}'")),
        }
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            World::Indexed => "indexed",
            World::Named => "named",
        })
    }
}

// ---------------------------------------------------------------------------
// printing

fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Abs(b) => {
            f.write_str("\\ ")?;
            fmt_term(b, f)
        }
        _ => fmt_app(t, f),
    }
}

fn fmt_app(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::App(l, r) => {
            fmt_app(l, f)?;
            f.write_str(" ")?;
            fmt_atom(r, f)
        }
        _ => fmt_atom(t, f),
    }
}

fn fmt_atom(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Index(n) => write!(f, "{n}"),
        Term::Meta(x, delta) => write!(f, "?{x}{delta}"),
        Term::Clos(a, b) => {
            fmt_atom(a, f)?;
            f.write_str("[")?;
            fmt_term(b, f)?;
            f.write_str("]")
        }
        Term::App(..) | Term::Abs(_) => {
            f.write_str("(")?;
            fmt_term(t, f)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, f)
    }
}

fn fmt_named(t: &NamedTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        NamedTerm::Abs(x, b) => {
            write!(f, "\\{x}. ")?;
            fmt_named(b, f)
        }
        _ => fmt_named_app(t, f),
    }
}

fn fmt_named_app(t: &NamedTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        NamedTerm::App(l, r) => {
            fmt_named_app(l, f)?;
            f.write_str(" ")?;
            fmt_named_atom(r, f)
        }
        _ => fmt_named_atom(t, f),
    }
}

fn fmt_named_atom(t: &NamedTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        NamedTerm::Var(x) => f.write_str(x),
        NamedTerm::Meta(x, delta) => write!(f, "?{x}{delta}"),
        NamedTerm::ExSub(a, x, b) => {
            fmt_named_atom(a, f)?;
            write!(f, "[{x}:=")?;
            fmt_named(b, f)?;
            f.write_str("]")
        }
        NamedTerm::App(..) | NamedTerm::Abs(..) => {
            f.write_str("(")?;
            fmt_named(t, f)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for NamedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_named(self, f)
    }
}

// ---------------------------------------------------------------------------
// lexing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Assign,
    Question,
    Num(u32),
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lambda => f.write_str("'\\'"),
            Tok::Dot => f.write_str("'.'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBrack => f.write_str("'['"),
            Tok::RBrack => f.write_str("']'"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::Comma => f.write_str("','"),
            Tok::Assign => f.write_str("':='"),
            Tok::Question => f.write_str("'?'"),
            Tok::Num(n) => write!(f, "index {n}"),
            Tok::Ident(x) => write!(f, "identifier '{x}'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let err = |message: String| ParseError { line: l, column: col, message };
        chars.next();
        if c == '\n' {
            line += 1;
            column = 1;
            continue;
        }
        column += 1;
        if c.is_whitespace() {
            continue;
        }
        let tok = match c {
            '\\' | 'λ' => Tok::Lambda,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '?' => Tok::Question,
            ':' => {
                if chars.peek() == Some(&'=') {
                    chars.next();
                    column += 1;
                    Tok::Assign
                } else {
                    return Err(err("expected ':='".into()));
                }
            }
            d if d.is_ascii_digit() => {
                let mut s = String::from(d);
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    chars.next();
                    column += 1;
                }
                let n: u32 = s.parse().map_err(|_| err(format!("index {s} out of range")))?;
                if n == 0 {
                    return Err(err("indexes start at 1".into()));
                }
                Tok::Num(n)
            }
            a if is_ident_start(a) => {
                let mut s = String::from(a);
                while let Some(&a) = chars.peek().filter(|a| is_ident_char(**a)) {
                    s.push(a);
                    chars.next();
                    column += 1;
                }
                Tok::Ident(s)
            }
            other => return Err(err(format!("unexpected character '{other}'"))),
        };
        out.push(Spanned { tok, line: l, column: col });
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

// ---------------------------------------------------------------------------
// parsing

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(input: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(input)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError { line: s.line, column: s.column, message: message.into() }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.next();
                Ok(x)
            }
            other => Err(self.error_here(format!("expected identifier, found {other}"))),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => Err(self.error_here(format!("unexpected {other} after term"))),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Num(_) | Tok::Ident(_) | Tok::LParen | Tok::Question)
    }

    // indexed

    fn term(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Lambda {
            self.next();
            return Ok(Term::lam(self.term()?));
        }
        let mut t = self.atom()?;
        while self.starts_atom() {
            t = Term::app(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let mut t = match self.peek().clone() {
            Tok::Num(n) => {
                self.next();
                Term::Index(n)
            }
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                t
            }
            Tok::Question => {
                self.next();
                let name = self.ident()?;
                self.expect(Tok::LBrace)?;
                let mut delta = NatSet::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        match self.peek().clone() {
                            Tok::Num(n) => {
                                self.next();
                                delta.insert(n);
                            }
                            other => {
                                return Err(self.error_here(format!("expected index, found {other}")))
                            }
                        }
                        if *self.peek() == Tok::Comma {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                Term::Meta(name, delta)
            }
            other => return Err(self.error_here(format!("expected a term, found {other}"))),
        };
        while *self.peek() == Tok::LBrack {
            self.next();
            let s = self.term()?;
            self.expect(Tok::RBrack)?;
            t = Term::clos(t, s);
        }
        Ok(t)
    }

    // named

    fn named_term(&mut self) -> Result<NamedTerm, ParseError> {
        if *self.peek() == Tok::Lambda {
            self.next();
            let x = self.ident()?;
            self.expect(Tok::Dot)?;
            return Ok(NamedTerm::lam(x, self.named_term()?));
        }
        let mut t = self.named_atom()?;
        while self.starts_atom() {
            t = NamedTerm::app(t, self.named_atom()?);
        }
        Ok(t)
    }

    fn named_atom(&mut self) -> Result<NamedTerm, ParseError> {
        let mut t = match self.peek().clone() {
            Tok::Ident(x) => {
                self.next();
                NamedTerm::Var(x)
            }
            Tok::LParen => {
                self.next();
                let t = self.named_term()?;
                self.expect(Tok::RParen)?;
                t
            }
            Tok::Question => {
                self.next();
                let name = self.ident()?;
                self.expect(Tok::LBrace)?;
                let mut delta = VarSet::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        delta.insert(self.ident()?);
                        if *self.peek() == Tok::Comma {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                NamedTerm::Meta(name, delta)
            }
            other => return Err(self.error_here(format!("expected a term, found {other}"))),
        };
        while *self.peek() == Tok::LBrack {
            self.next();
            let x = self.ident()?;
            self.expect(Tok::Assign)?;
            let s = self.named_term()?;
            self.expect(Tok::RBrack)?;
            t = NamedTerm::exsub(t, x, s);
        }
        Ok(t)
    }
}

pub fn parse_indexed(input: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(input)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_named(input: &str) -> Result<NamedTerm, ParseError> {
    let mut p = Parser::new(input)?;
    let t = p.named_term()?;
    p.finish()?;
    Ok(t)
}

impl std::str::FromStr for Term {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_indexed(s)
    }
}

impl std::str::FromStr for NamedTerm {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_named(s)
    }
}
