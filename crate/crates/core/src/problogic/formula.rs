use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::ProbLogicError;
use crate::error::ParseError;

/// Propositional formula over named atoms. `Implies` is the material
/// conditional `¬a ∨ b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a);
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Truth value under `lookup`, which must cover every atom.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<bool, ProbLogicError>
    where
        F: Fn(&str) -> Option<bool>,
    {
        Ok(match self {
            Formula::Atom(a) => lookup(a).ok_or_else(|| ProbLogicError::UnassignedAtom(a.clone()))?,
            Formula::Not(f) => !f.eval_with(lookup)?,
            Formula::And(a, b) => a.eval_with(lookup)? && b.eval_with(lookup)?,
            Formula::Or(a, b) => a.eval_with(lookup)? || b.eval_with(lookup)?,
            Formula::Implies(a, b) => !a.eval_with(lookup)? || b.eval_with(lookup)?,
        })
    }

    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        parse_formula(1, text)
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) => 4,
            Formula::Atom(_) => 5,
        }
    }
}

/// Truth-functional evaluation; `IMPLIES(a, b)` is `(not a) or b`.
pub fn eval_formula(f: &Formula, assignment: &BTreeMap<String, bool>) -> Result<bool, ProbLogicError> {
    f.eval_with(&|a: &str| assignment.get(a).copied())
}

struct Child<'a>(&'a Formula, u8);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::Not(x) => write!(f, "~{}", Child(x, 4)),
            Formula::And(a, b) => write!(f, "{} & {}", Child(a, 3), Child(b, 4)),
            Formula::Or(a, b) => write!(f, "{} | {}", Child(a, 2), Child(b, 3)),
            Formula::Implies(a, b) => write!(f, "{} -> {}", Child(a, 2), Child(b, 1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    Not,
    And,
    Or,
    Implies,
    Open,
    Close,
}

fn lex(line: usize, text: &str) -> Result<Vec<Tok>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '~' | '!' => {
                out.push(Tok::Not);
                i += 1;
            }
            '&' => {
                out.push(Tok::And);
                i += 1;
            }
            '|' => {
                out.push(Tok::Or);
                i += 1;
            }
            '(' => {
                out.push(Tok::Open);
                i += 1;
            }
            ')' => {
                out.push(Tok::Close);
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Tok::Implies);
                i += 2;
            }
            _ if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Atom(chars[start..i].iter().collect()));
            }
            _ => return Err(ParseError::new(line, format!("unexpected character {c:?} in formula"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Tok],
    pos: usize,
    line: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::new(self.line, message.to_string())
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.error("missing ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Tok::Atom(a)) => {
                self.pos += 1;
                Ok(Formula::Atom(a))
            }
            _ => Err(self.error("expected an atom, '~' or '('")),
        }
    }
}

/// Parses `~`, `&`, `|`, `->` (loosest, right-associative) with parentheses.
pub(crate) fn parse_formula(line: usize, text: &str) -> Result<Formula, ParseError> {
    let tokens = lex(line, text)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        line,
    };
    let f = parser.implication()?;
    if parser.pos != tokens.len() {
        return Err(parser.error("trailing input in formula"));
    }
    Ok(f)
}
