//! Propositions, sequents, their concrete syntax and negation normal form.
//!
//! Surface syntax (ASCII, with Unicode aliases on input):
//!
//! ```text
//! sequent := list "|-" list                  ("⊢" and "⊨" also accepted)
//! list    := [ disj { "," disj } ]
//! disj    := conj [ "|" conj ]               ("∨")
//! conj    := unary [ "&" unary ]             ("∧")
//! unary   := "~" unary | atom | "(" disj ")" ("¬")
//! atom    := [a-zA-Z][a-zA-Z0-9_]*
//! ```
//!
//! `∧` and `∨` are not associative, so `p & q & r` and `p | q | r` are
//! rejected: the grouping has to be written out.

use std::fmt;
use std::sync::Arc;

use crate::error::ParseError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    Atom(Arc<str>),
    Neg(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn atom(name: &str) -> Prop {
        Prop::Atom(Arc::from(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Prop) -> Prop {
        Prop::Neg(Box::new(p))
    }

    pub fn and(l: Prop, r: Prop) -> Prop {
        Prop::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Prop, r: Prop) -> Prop {
        Prop::Or(Box::new(l), Box::new(r))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Prop::Atom(_))
    }

    /// Whether the proposition belongs to the restricted language:
    /// negation only applied to atoms.
    pub fn is_restricted(&self) -> bool {
        match self {
            Prop::Atom(_) => true,
            Prop::Neg(p) => p.is_atom(),
            Prop::And(l, r) | Prop::Or(l, r) => l.is_restricted() && r.is_restricted(),
        }
    }

    /// Atom names in order of first occurrence.
    pub fn atoms(&self) -> Vec<Arc<str>> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Arc<str>>) {
        match self {
            Prop::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Prop::Neg(p) => p.collect_atoms(out),
            Prop::And(l, r) | Prop::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Connective depth: atoms are 0.
    pub fn depth(&self) -> usize {
        match self {
            Prop::Atom(_) => 0,
            Prop::Neg(p) => 1 + p.depth(),
            Prop::And(l, r) | Prop::Or(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Every subformula, including `self`, each listed once, children first.
    pub fn subformulas(&self) -> Vec<Prop> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut Vec<Prop>) {
        match self {
            Prop::Atom(_) => {}
            Prop::Neg(p) => p.collect_subformulas(out),
            Prop::And(l, r) | Prop::Or(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
        }
        if !out.contains(self) {
            out.push(self.clone());
        }
    }

    pub fn parse(text: &str) -> Result<Prop, ParseError> {
        let mut p = Parser::new(text)?;
        let prop = p.disj()?;
        p.expect_end()?;
        Ok(prop)
    }
}

/// Pushes negations to the atoms, reversing operand order:
/// `¬(α ∧ β) ↦ ¬β ∨ ¬α`, `¬(α ∨ β) ↦ ¬β ∧ ¬α`, `¬¬α ↦ α`.
pub fn to_nnf(p: &Prop) -> Prop {
    match p {
        Prop::Atom(_) => p.clone(),
        Prop::And(l, r) => Prop::and(to_nnf(l), to_nnf(r)),
        Prop::Or(l, r) => Prop::or(to_nnf(l), to_nnf(r)),
        Prop::Neg(inner) => negate(inner),
    }
}

/// NNF of `¬p`. On restricted input this is an involution.
pub fn negate(p: &Prop) -> Prop {
    match p {
        Prop::Atom(_) => Prop::not(p.clone()),
        Prop::Neg(inner) => to_nnf(inner),
        Prop::And(l, r) => Prop::or(negate(r), negate(l)),
        Prop::Or(l, r) => Prop::and(negate(r), negate(l)),
    }
}

impl fmt::Debug for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Atom(a) => f.write_str(a),
            Prop::Neg(p) => match **p {
                Prop::Atom(_) | Prop::Neg(_) => write!(f, "~{p}"),
                _ => write!(f, "~({p})"),
            },
            Prop::And(l, r) => {
                let side = |f: &mut fmt::Formatter<'_>, p: &Prop| match p {
                    Prop::And(..) | Prop::Or(..) => write!(f, "({p})"),
                    _ => write!(f, "{p}"),
                };
                side(f, l)?;
                f.write_str(" & ")?;
                side(f, r)
            }
            Prop::Or(l, r) => {
                let side = |f: &mut fmt::Formatter<'_>, p: &Prop| match p {
                    Prop::Or(..) => write!(f, "({p})"),
                    _ => write!(f, "{p}"),
                };
                side(f, l)?;
                f.write_str(" | ")?;
                side(f, r)
            }
        }
    }
}

/// Two ordered lists of propositions around a turnstile.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sequent {
    pub lhs: Vec<Prop>,
    pub rhs: Vec<Prop>,
}

impl Sequent {
    pub fn new(lhs: Vec<Prop>, rhs: Vec<Prop>) -> Self {
        Sequent { lhs, rhs }
    }

    /// `lhs ⊢` with an empty right side.
    pub fn left(lhs: Vec<Prop>) -> Self {
        Sequent { lhs, rhs: Vec::new() }
    }

    pub fn parse(text: &str) -> Result<Sequent, ParseError> {
        let mut p = Parser::new(text)?;
        let lhs = p.list()?;
        if !p.eat(&Token::Turnstile) {
            return Err(p.error("expected `|-`"));
        }
        let rhs = p.list()?;
        p.expect_end()?;
        Ok(Sequent { lhs, rhs })
    }

    /// Empty right side and every formula in the restricted language.
    pub fn is_normalized(&self) -> bool {
        self.rhs.is_empty() && self.lhs.iter().all(Prop::is_restricted)
    }

    /// Distinct atoms, sorted by name.
    pub fn atoms(&self) -> Vec<Arc<str>> {
        let mut out: Vec<Arc<str>> = Vec::new();
        for p in self.lhs.iter().chain(&self.rhs) {
            for a in p.atoms() {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out.sort();
        out
    }
}

/// Moves every right-hand formula to the left as its NNF negation, first
/// formula first, and puts the left side in NNF. Validity is preserved in
/// every O-space.
pub fn normalize_sequent(s: &Sequent) -> Sequent {
    let mut lhs: Vec<Prop> = s.lhs.iter().map(to_nnf).collect();
    lhs.extend(s.rhs.iter().map(negate));
    Sequent::left(lhs)
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, ps: &[Prop]| -> fmt::Result {
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p}")?;
            }
            Ok(())
        };
        list(f, &self.lhs)?;
        if !self.lhs.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str("|-")?;
        if !self.rhs.is_empty() {
            f.write_str(" ")?;
        }
        list(f, &self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Turnstile,
    LParen,
    RParen,
    Comma,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Not => f.write_str("`~`"),
            Token::And => f.write_str("`&`"),
            Token::Or => f.write_str("`|`"),
            Token::Turnstile => f.write_str("`|-`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Comma => f.write_str("`,`"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' | '¬' => Token::Not,
            '&' | '∧' => Token::And,
            '∨' => Token::Or,
            '⊢' | '⊨' => Token::Turnstile,
            '|' if chars.get(i + 1) == Some(&'-') => {
                i += 1;
                Token::Turnstile
            }
            '|' => Token::Or,
            '(' => Token::LParen,
            ')' => Token::RParen,
            ',' => Token::Comma,
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Token::Ident(chars[start..=i].iter().collect())
            }
            other => return Err(ParseError::at(col, format!("unexpected character `{other}`"))),
        };
        out.push((col, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: tokenize(text)?,
            pos: 0,
            end_col: text.chars().count() + 1,
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn error(&self, message: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::at(self.col(), format!("{message}, found {t}")),
            None => ParseError::at(self.col(), format!("{message}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("expected end of input")),
        }
    }

    fn list(&mut self) -> Result<Vec<Prop>, ParseError> {
        let mut out = Vec::new();
        if matches!(self.peek(), None | Some(Token::Turnstile)) {
            return Ok(out);
        }
        out.push(self.disj()?);
        while self.eat(&Token::Comma) {
            out.push(self.disj()?);
        }
        Ok(out)
    }

    fn disj(&mut self) -> Result<Prop, ParseError> {
        let left = self.conj()?;
        if !self.eat(&Token::Or) {
            return Ok(left);
        }
        let right = self.conj()?;
        if self.peek() == Some(&Token::Or) {
            return Err(ParseError::at(
                self.col(),
                "ambiguous association: `|` is not associative, add parentheses",
            ));
        }
        Ok(Prop::or(left, right))
    }

    fn conj(&mut self) -> Result<Prop, ParseError> {
        let left = self.unary()?;
        if !self.eat(&Token::And) {
            return Ok(left);
        }
        let right = self.unary()?;
        if self.peek() == Some(&Token::And) {
            return Err(ParseError::at(
                self.col(),
                "ambiguous association: `&` is not associative, add parentheses",
            ));
        }
        Ok(Prop::and(left, right))
    }

    fn unary(&mut self) -> Result<Prop, ParseError> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Prop::not(self.unary()?))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Prop::atom(&name))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.disj()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            _ => Err(self.error("expected a proposition")),
        }
    }
}
