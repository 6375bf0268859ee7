//! Terms, formulas and their concrete syntax.
//!
//! ```text
//! formula  := implies
//! implies  := or ( "->" implies )?
//! or       := and ( "|" and )*
//! and      := unary ( "&" unary )*
//! unary    := "~" unary | ("A" | "E") ident "." implies | "(" formula ")" | atom
//! atom     := "V" "(" term ")" "=" term | term ( "=" | "<=" | "<" ) term
//! term     := summand ( "+" summand )*
//! summand  := ident | numeral | "(" term ")"
//! ```
//!
//! A quantifier's body extends as far to the right as possible. `A`, `E`
//! and `V` are reserved.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::Nat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at column {}: {message}", .position + 1)]
pub struct SyntaxError {
    /// Character offset of the offending token.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// The number itself, whatever its representation.
    Num(Nat),
    Add(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Le(Term, Term),
    Lt(Term, Term),
    /// `V(t) = s`.
    LeastTerm(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_owned())
    }

    pub fn num(n: u64) -> Self {
        Term::Num(Nat::from(n))
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Num(_) => {}
            Term::Add(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl std::ops::Add for Term {
    type Output = Term;

    fn add(self, rhs: Term) -> Term {
        Term::Add(Box::new(self), Box::new(rhs))
    }
}

impl Formula {
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::Exists(var.to_owned(), Box::new(body))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::Forall(var.to_owned(), Box::new(body))
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn collect_free(&self, bound: &mut BTreeSet<String>, out: &mut Vec<String>) {
        let terms = |ts: [&Term; 2], out: &mut Vec<String>| {
            let mut vars = Vec::new();
            for t in ts {
                t.collect_vars(&mut vars);
            }
            for v in vars {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) | Formula::LeastTerm(a, b) => terms([a, b], out),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let fresh = bound.insert(v.clone());
                f.collect_free(bound, out);
                if fresh {
                    bound.remove(v);
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) => 4,
            _ => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Le(a, b) => write!(f, "{a} <= {b}"),
            Formula::Lt(a, b) => write!(f, "{a} < {b}"),
            Formula::LeastTerm(a, b) => write!(f, "V({a}) = {b}"),
            Formula::Not(g) => {
                write!(f, "~")?;
                g.fmt_at(f, 4)
            }
            Formula::And(g, h) => {
                g.fmt_at(f, 3)?;
                write!(f, " & ")?;
                h.fmt_at(f, 4)
            }
            Formula::Or(g, h) => {
                g.fmt_at(f, 2)?;
                write!(f, " | ")?;
                h.fmt_at(f, 3)
            }
            Formula::Implies(g, h) => {
                g.fmt_at(f, 2)?;
                write!(f, " -> ")?;
                h.fmt_at(f, 1)
            }
            Formula::Exists(v, g) => {
                write!(f, "E {v}. ")?;
                g.fmt_at(f, 0)
            }
            Formula::Forall(v, g) => {
                write!(f, "A {v}. ")?;
                g.fmt_at(f, 0)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Num(n) => write!(f, "{n}"),
            Term::Add(a, b) => {
                write!(f, "{a} + ")?;
                if matches!(**b, Term::Add(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Num(Nat),
    LParen,
    RParen,
    Dot,
    Plus,
    Eq,
    Le,
    Lt,
    Not,
    And,
    Or,
    Arrow,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Num(n) => write!(f, "`{n}`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::Dot => write!(f, "`.`"),
            Token::Plus => write!(f, "`+`"),
            Token::Eq => write!(f, "`=`"),
            Token::Le => write!(f, "`<=`"),
            Token::Lt => write!(f, "`<`"),
            Token::Not => write!(f, "`~`"),
            Token::And => write!(f, "`&`"),
            Token::Or => write!(f, "`|`"),
            Token::Arrow => write!(f, "`->`"),
            Token::End => write!(f, "end of input"),
        }
    }
}

const RESERVED: [&str; 3] = ["A", "E", "V"];

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let single = match c {
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            '.' => Some(Token::Dot),
            '+' => Some(Token::Plus),
            '=' => Some(Token::Eq),
            '~' => Some(Token::Not),
            '&' => Some(Token::And),
            '|' => Some(Token::Or),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((start, tok));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '<' {
            if chars.get(i + 1) == Some(&'=') {
                out.push((start, Token::Le));
                i += 2;
            } else {
                out.push((start, Token::Lt));
                i += 1;
            }
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((start, Token::Arrow));
            i += 2;
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((start, Token::Num(digits.parse().expect("decimal digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else {
            return Err(SyntaxError { position: start, message: format!("unexpected character `{c}`") });
        }
    }
    out.push((chars.len(), Token::End));
    Ok(out)
}

pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0 };
    let formula = parser.implies()?;
    parser.expect(Token::End)?;
    Ok(formula)
}

pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0 };
    let term = parser.term()?;
    parser.expect(Token::End)?;
    Ok(term)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn peek_at(&self, ahead: usize) -> &Token {
        &self.tokens[(self.pos + ahead).min(self.tokens.len() - 1)].1
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].1.clone();
        if tok != Token::End {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: String) -> SyntaxError {
        SyntaxError { position: self.tokens[self.pos].0, message }
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Token) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn implies(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.or()?;
        if *self.peek() == Token::Arrow {
            self.bump();
            return Ok(left.implies(self.implies()?));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.and()?;
        while *self.peek() == Token::Or {
            self.bump();
            left = left.or(self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.unary()?;
        while *self.peek() == Token::And {
            self.bump();
            left = left.and(self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Token::Not => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Token::Ident(q) if (q == "A" || q == "E") && matches!(self.peek_at(1), Token::Ident(_)) => {
                self.bump();
                let var = self.variable()?;
                self.expect(Token::Dot)?;
                let body = self.implies()?;
                Ok(if q == "A" { Formula::forall(&var, body) } else { Formula::exists(&var, body) })
            }
            Token::LParen => {
                // either a parenthesized formula or an atom starting with a
                // parenthesized term
                let start = self.pos;
                match self.atom() {
                    Ok(atom) => Ok(atom),
                    Err(atom_err) => {
                        let atom_pos = self.pos;
                        self.pos = start;
                        self.bump();
                        let inner = self.implies().and_then(|f| self.expect(Token::RParen).map(|()| f));
                        match inner {
                            Ok(f) => Ok(f),
                            Err(e) if atom_err.position > e.position => {
                                self.pos = atom_pos;
                                Err(atom_err)
                            }
                            Err(e) => Err(e),
                        }
                    }
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        if *self.peek() == Token::Ident("V".into()) {
            self.bump();
            self.expect(Token::LParen)?;
            let arg = self.term()?;
            self.expect(Token::RParen)?;
            self.expect(Token::Eq)?;
            return Ok(Formula::LeastTerm(arg, self.term()?));
        }
        let left = self.term()?;
        let make = match self.peek() {
            Token::Eq => Formula::Eq,
            Token::Le => Formula::Le,
            Token::Lt => Formula::Lt,
            _ => return Err(self.unexpected("`=`, `<=` or `<`")),
        };
        self.bump();
        Ok(make(left, self.term()?))
    }

    fn variable(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Token::Ident(name) if RESERVED.contains(&name.as_str()) => {
                Err(self.error(format!("`{name}` is reserved and cannot name a variable")))
            }
            Token::Ident(name) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let mut left = self.summand()?;
        while *self.peek() == Token::Plus {
            self.bump();
            left = left + self.summand()?;
        }
        Ok(left)
    }

    fn summand(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Token::Num(n) => {
                self.bump();
                Ok(Term::Num(n))
            }
            Token::Ident(_) => Ok(Term::Var(self.variable()?)),
            Token::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Token::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("a variable, a numeral or `(`")),
        }
    }
}
