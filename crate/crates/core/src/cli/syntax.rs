//! Lexer and parser for scenario files.
//!
//! The grammar is line oriented:
//!
//! ```text
//! # comment
//! option seed = 7
//! let A = matrix 2 2 [0,-1,1,0]
//! let B = normal_cone(polyhedron_h(2, eq=[[0,1,0]]))
//! verify theorem1(A, identity_relation(2), B) label="rotation"
//! ```
//!
//! A constructor is applied either with parentheses, `f(x, k=v)`, or by
//! juxtaposition of atoms, `f x y`. Numbers are exact rationals (`3/7`).

use std::collections::HashSet;
use std::fmt;

use crate::exact_la::{parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

/// A scenario error with its source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            pos,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(Rational),
    Str(String),
    Sym(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(r) => write!(f, "number {r}"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Sym(c) => write!(f, "`{c}`"),
        }
    }
}

fn lex_line(line: &str, lineno: usize) -> Result<Vec<(Tok, Pos)>, Diagnostic> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos {
            line: lineno,
            column: i + 1,
        };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        let starts_number = c.is_ascii_digit()
            || ((c == '-' || c == '+') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()));
        if starts_number {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let r = parse_rational(text.trim_start_matches('+'))
                .ok_or_else(|| Diagnostic::new(pos, format!("malformed rational literal {text:?}")))?;
            out.push((Tok::Number(r), pos));
            continue;
        }
        if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                i += 1;
            }
            if i == chars.len() {
                return Err(Diagnostic::new(pos, "unterminated string"));
            }
            out.push((Tok::Str(chars[start..i].iter().collect()), pos));
            i += 1;
            continue;
        }
        if "()[],=".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
            continue;
        }
        return Err(Diagnostic::new(pos, format!("unexpected character {c:?}")));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Number(Rational),
    Str(String),
    Name(String),
    List(Vec<Expr>),
    Call { ctor: String, args: Vec<Arg> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub pos: Pos,
    pub kind: ExprKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arg {
    pub key: Option<String>,
    pub value: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Let { name: String, expr: Expr },
    Verify { statement: String, args: Vec<Arg> },
    Option { key: String, value: Expr },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Located {
    pub pos: Pos,
    pub item: Item,
}

/// Parsed scenario file: items in source order, names resolved.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ScenarioFile {
    pub items: Vec<Located>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn expected(&self, what: &str) -> Diagnostic {
        let found = self.peek().map_or("end of line".to_string(), |t| t.to_string());
        Diagnostic::new(self.pos(), format!("expected {what}, found {found}"))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Diagnostic> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.expected(&format!("`{c}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => Err(self.expected(what)),
        }
    }

    fn done(&self) -> Result<(), Diagnostic> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            Err(self.expected("end of line"))
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Number(_) | Tok::Str(_) | Tok::Ident(_) | Tok::Sym('['))
        ) && !self.is_keyword_arg()
    }

    fn is_keyword_arg(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_)))
            && matches!(self.toks.get(self.at + 1), Some((Tok::Sym('='), _)))
    }

    /// number, string, list, bare name or parenthesized call
    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Number(r)) => {
                self.at += 1;
                Ok(Expr {
                    pos,
                    kind: ExprKind::Number(r),
                })
            }
            Some(Tok::Str(s)) => {
                self.at += 1;
                Ok(Expr {
                    pos,
                    kind: ExprKind::Str(s),
                })
            }
            Some(Tok::Sym('[')) => {
                self.at += 1;
                let mut items = Vec::new();
                if !self.eat(']') {
                    loop {
                        items.push(self.expr()?);
                        if self.eat(']') {
                            break;
                        }
                        if !self.eat(',') {
                            return Err(self.expected("`,` or `]`"));
                        }
                    }
                }
                Ok(Expr {
                    pos,
                    kind: ExprKind::List(items),
                })
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if self.eat('(') {
                    let args = self.args(')')?;
                    Ok(Expr {
                        pos,
                        kind: ExprKind::Call { ctor: name, args },
                    })
                } else {
                    Ok(Expr {
                        pos,
                        kind: ExprKind::Name(name),
                    })
                }
            }
            _ => Err(self.expected("a number, string, list, name or constructor")),
        }
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let head = self.atom()?;
        if let ExprKind::Name(ctor) = &head.kind {
            if self.starts_atom() {
                let mut args = Vec::new();
                while self.starts_atom() {
                    args.push(Arg {
                        key: None,
                        value: self.atom()?,
                    });
                }
                return Ok(Expr {
                    pos: head.pos,
                    kind: ExprKind::Call {
                        ctor: ctor.clone(),
                        args,
                    },
                });
            }
        }
        Ok(head)
    }

    fn arg(&mut self) -> Result<Arg, Diagnostic> {
        if self.is_keyword_arg() {
            let key = self.ident("a keyword")?;
            self.expect('=')?;
            Ok(Arg {
                key: Some(key),
                value: self.expr()?,
            })
        } else {
            Ok(Arg {
                key: None,
                value: self.expr()?,
            })
        }
    }

    fn args(&mut self, close: char) -> Result<Vec<Arg>, Diagnostic> {
        let mut args = Vec::new();
        if self.eat(close) {
            return Ok(args);
        }
        loop {
            args.push(self.arg()?);
            if self.eat(close) {
                return Ok(args);
            }
            if !self.eat(',') {
                return Err(self.expected(&format!("`,` or `{close}`")));
            }
        }
    }
}

fn parse_line(toks: Vec<(Tok, Pos)>, end: Pos) -> Result<Located, Diagnostic> {
    let mut p = Parser { toks, at: 0, end };
    let pos = p.pos();
    let keyword = p.ident("`let`, `verify` or `option`")?;
    let item = match keyword.as_str() {
        "let" => {
            let name = p.ident("a name")?;
            p.expect('=')?;
            let expr = p.expr()?;
            Item::Let { name, expr }
        }
        "verify" => {
            let statement = p.ident("a statement name")?;
            let mut args = if p.eat('(') { p.args(')')? } else { Vec::new() };
            while p.at < p.toks.len() {
                if !p.is_keyword_arg() {
                    return Err(p.expected("`key=value` or end of line"));
                }
                args.push(p.arg()?);
            }
            Item::Verify { statement, args }
        }
        "option" => {
            let key = p.ident("an option name")?;
            p.eat('=');
            let value = p.expr()?;
            Item::Option { key, value }
        }
        _ => {
            return Err(Diagnostic::new(
                pos,
                format!("expected `let`, `verify` or `option`, found `{keyword}`"),
            ))
        }
    };
    p.done()?;
    Ok(Located { pos, item })
}

fn check_names(e: &Expr, declared: &HashSet<String>) -> Result<(), Diagnostic> {
    match &e.kind {
        ExprKind::Name(n) => {
            if declared.contains(n) {
                Ok(())
            } else {
                Err(Diagnostic::new(e.pos, format!("undefined name {n}")))
            }
        }
        ExprKind::List(items) => items.iter().try_for_each(|x| check_names(x, declared)),
        ExprKind::Call { args, .. } => args
            .iter()
            .filter(|a| a.key.is_none() || is_value_key(a.key.as_deref()))
            .try_for_each(|a| check_names(&a.value, declared)),
        _ => Ok(()),
    }
}

// Keyword arguments whose values are symbolic words, not expressions.
fn is_value_key(key: Option<&str>) -> bool {
    !matches!(key, Some("mode" | "variant" | "expect"))
}

/// Parses a scenario file and checks that every name is declared before use.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile, Diagnostic> {
    let mut file = ScenarioFile::default();
    let mut declared = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let toks = lex_line(line, i + 1)?;
        if toks.is_empty() {
            continue;
        }
        let end = Pos {
            line: i + 1,
            column: line.chars().count() + 1,
        };
        let located = parse_line(toks, end)?;
        match &located.item {
            Item::Let { name, expr } => {
                check_names(expr, &declared)?;
                declared.insert(name.clone());
            }
            Item::Verify { args, .. } => {
                for a in args.iter().filter(|a| is_value_key(a.key.as_deref())) {
                    check_names(&a.value, &declared)?;
                }
            }
            Item::Option { .. } => {}
        }
        file.items.push(located);
    }
    Ok(file)
}
