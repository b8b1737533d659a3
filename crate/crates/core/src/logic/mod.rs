//! Propositional formulas over process atoms.
//!
//! Grammar (lowest precedence first, binary operators left-associative):
//!
//! ```text
//! formula := or
//! or      := and { ("|" | "\/" | "or") and }
//! and     := not { ("&" | "/\" | "and") not }
//! not     := ("~" | "!" | "not") not | atom
//! atom    := NAME | "0" | "1" | "(" formula ")"
//! ```
//!
//! `not`, `and` and `or` are reserved and cannot be used as atom names.

mod compare;
mod eval;

use std::collections::HashMap;
use std::fmt;

pub use compare::{
    compare_laws, compare_laws_with, CompareError, LawComparison, LawFailure, LawTemplate, SampleMode, sweep_trace,
    EXHAUSTIVE_LIMIT,
};
pub use eval::{eval_boolean, eval_ortho, evaluate, BooleanModel, EvalError, OrthoModel, Semantics, SemanticsKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Bottom,
    Top,
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    /// Atom names in order of first occurrence.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            Formula::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Bottom | Formula::Top => {}
        }
    }

    /// Replaces atoms found in `bindings`; others are left as they are.
    pub fn substitute(&self, bindings: &HashMap<&str, &str>) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(bindings.get(a.as_str()).map_or_else(|| a.clone(), |s| s.to_string())),
            Formula::Not(f) => f.substitute(bindings).negate(),
            Formula::And(a, b) => a.substitute(bindings).and(b.substitute(bindings)),
            Formula::Or(a, b) => a.substitute(bindings).or(b.substitute(bindings)),
            Formula::Bottom => Formula::Bottom,
            Formula::Top => Formula::Top,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 0,
            Formula::And(..) => 1,
            _ => 2,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, child: &Formula, min: u8) -> fmt::Result {
        if child.precedence() < min {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

/// Writes ASCII syntax with only the parentheses the grammar needs.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::Bottom => f.write_str("0"),
            Formula::Top => f.write_str("1"),
            Formula::Not(c) => {
                f.write_str("~")?;
                self.fmt_child(f, c, 2)
            }
            Formula::And(a, b) => {
                self.fmt_child(f, a, 1)?;
                f.write_str(" & ")?;
                self.fmt_child(f, b, 2)
            }
            Formula::Or(a, b) => {
                self.fmt_child(f, a, 0)?;
                f.write_str(" | ")?;
                self.fmt_child(f, b, 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("formula syntax error at column {column}: {message}")]
pub struct FormulaError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Not,
    And,
    Or,
    Zero,
    One,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        let two = |next: char| chars.get(i + 1) == Some(&next);
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '~' | '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '(' => Tok::Open,
            ')' => Tok::Close,
            '/' if two('\\') => {
                i += 1;
                Tok::And
            }
            '\\' if two('/') => {
                i += 1;
                Tok::Or
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "not" => Tok::Not,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    _ => Tok::Name(word),
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "0" => Tok::Zero,
                    "1" => Tok::One,
                    _ => {
                        return Err(FormulaError {
                            column: col,
                            message: format!("unexpected `{word}`"),
                        })
                    }
                }
            }
            other => {
                return Err(FormulaError {
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((col, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error(&self, message: impl Into<String>) -> FormulaError {
        FormulaError {
            column: self.column(),
            message: message.into(),
        }
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.not()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = lhs.and(self.not()?);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Formula, FormulaError> {
        if self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            return Ok(self.not()?.negate());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("unexpected end of formula"));
        };
        let node = match tok {
            Tok::Name(n) => Formula::Atom(n),
            Tok::Zero => Formula::Bottom,
            Tok::One => Formula::Top,
            Tok::Open => {
                self.pos += 1;
                let inner = self.or()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.error("expected `)`"));
                }
                inner
            }
            Tok::Close => return Err(self.error("unexpected `)`")),
            Tok::And | Tok::Or => return Err(self.error("expected an operand")),
            Tok::Not => unreachable!("handled by not()"),
        };
        self.pos += 1;
        Ok(node)
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.chars().count() + 1,
    };
    let f = p.or()?;
    if p.pos < p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
