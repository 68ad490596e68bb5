//! Line-oriented LP text format.
//!
//! ```text
//! # comment
//! minimize: x1 + x2
//! r1: x1 + 2 x2 >= 2
//! 2 x1 + x2 >= 2
//! bounds x1 0 1
//! bounds y -inf inf
//! binary x1 x2
//! multipliers 1/2 1/2
//! ```
//!
//! `maximize:` replaces `minimize:`; a missing objective line means
//! "minimize 0". Row labels (`r1:`) are accepted and ignored. `binary`
//! marks 0–1 variables for the MILP solver and `multipliers` carries one
//! nonnegative weight per row for Chvátal–Gomory rounding.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num::Zero;

use super::{write_linear_form, Bounds, LinearConstraint, LpProblem, Relation, Sense};
use crate::error::ParseError;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpFile {
    pub problem: LpProblem,
    pub integral: BTreeSet<String>,
    pub multipliers: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Rel(Relation),
}

fn tokenize(line: usize, text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == '/') {
                i += 1;
            }
            out.push(Token::Number(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                ('+', _) => (Token::Plus, 1),
                ('-', _) => (Token::Minus, 1),
                ('*', _) => (Token::Star, 1),
                ('>', Some('=')) | ('=', Some('>')) => (Token::Rel(Relation::Ge), 2),
                ('<', Some('=')) | ('=', Some('<')) => (Token::Rel(Relation::Le), 2),
                ('>', _) => (Token::Rel(Relation::Ge), 1),
                ('<', _) => (Token::Rel(Relation::Le), 1),
                ('=', _) => (Token::Rel(Relation::Eq), 1),
                _ => return Err(ParseError::new(line, format!("unexpected character {c:?}"))),
            };
            out.push(tok);
            i += len;
        }
    }
    Ok(out)
}

fn number(line: usize, text: &str) -> Result<Rational, ParseError> {
    parse_rational(text).map_err(|e| ParseError::new(line, e))
}

/// Parses `Σ [±] [coef [*]] var`. A lone `0` denotes the empty form.
pub fn parse_linear_form(line: usize, text: &str) -> Result<BTreeMap<String, Rational>, ParseError> {
    let tokens = tokenize(line, text)?;
    linear_form(line, &tokens)
}

fn linear_form(line: usize, tokens: &[Token]) -> Result<BTreeMap<String, Rational>, ParseError> {
    let mut terms: BTreeMap<String, Rational> = BTreeMap::new();
    if let [Token::Number(n)] = tokens {
        if number(line, n)?.is_zero() {
            return Ok(terms);
        }
    }
    let mut i = 0;
    while i < tokens.len() {
        let mut negative = false;
        while let Some(Token::Plus | Token::Minus) = tokens.get(i) {
            negative ^= tokens[i] == Token::Minus;
            i += 1;
        }
        let mut coef = Rational::from_integer(1.into());
        if let Some(Token::Number(n)) = tokens.get(i) {
            coef = number(line, n)?;
            i += 1;
            if tokens.get(i) == Some(&Token::Star) {
                i += 1;
            }
        }
        let Some(Token::Ident(var)) = tokens.get(i) else {
            return Err(ParseError::new(line, "expected a variable name"));
        };
        i += 1;
        if negative {
            coef = -coef;
        }
        *terms.entry(var.clone()).or_insert_with(Rational::zero) += coef;
        match tokens.get(i) {
            None | Some(Token::Plus | Token::Minus) => {}
            Some(_) => return Err(ParseError::new(line, "expected + or - between terms")),
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(terms)
}

/// Parses one constraint such as `x1 - x3 >= 0`.
pub fn parse_constraint(line: usize, text: &str) -> Result<LinearConstraint, ParseError> {
    let tokens = tokenize(line, text)?;
    let Some(pos) = tokens.iter().position(|t| matches!(t, Token::Rel(_))) else {
        return Err(ParseError::new(line, "constraint needs >=, <= or ="));
    };
    let Token::Rel(relation) = tokens[pos] else { unreachable!() };
    let lhs = linear_form(line, &tokens[..pos])?;
    let rhs_tokens = &tokens[pos + 1..];
    let rhs = match rhs_tokens {
        [Token::Number(n)] => number(line, n)?,
        [Token::Minus, Token::Number(n)] => -number(line, n)?,
        [Token::Plus, Token::Number(n)] => number(line, n)?,
        _ => return Err(ParseError::new(line, "right-hand side must be a single number")),
    };
    LinearConstraint::new(lhs, relation, rhs).map_err(|e| ParseError::new(line, e.to_string()))
}

fn strip_label(text: &str) -> &str {
    match text.split_once(':') {
        Some((label, rest)) if !label.trim().is_empty() && label.trim().chars().all(|c| c.is_alphanumeric() || c == '_') => rest,
        _ => text,
    }
}

fn bound_value(line: usize, text: &str) -> Result<Option<Rational>, ParseError> {
    match text {
        "-inf" | "inf" | "+inf" => Ok(None),
        _ => number(line, text).map(Some),
    }
}

pub fn parse_lp(text: &str) -> Result<LpFile, ParseError> {
    let mut problem = LpProblem::minimize();
    let mut integral = BTreeSet::new();
    let mut multipliers = None;
    let mut seen_objective = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let lower = content.to_ascii_lowercase();
        let objective = ["minimize:", "min:", "maximize:", "max:"]
            .iter()
            .find(|p| lower.starts_with(*p));
        if let Some(prefix) = objective {
            if seen_objective {
                return Err(ParseError::new(line, "duplicate objective"));
            }
            seen_objective = true;
            problem.sense = if prefix.starts_with("min") { Sense::Min } else { Sense::Max };
            problem.objective = parse_linear_form(line, &content[prefix.len()..])?;
            continue;
        }
        let mut words = content.split_whitespace();
        match words.next() {
            Some("bounds") => {
                let parts: Vec<&str> = words.collect();
                let [var, lo, hi] = parts[..] else {
                    return Err(ParseError::new(line, "expected: bounds <var> <lower> <upper>"));
                };
                problem.set_bounds(var, Bounds::new(bound_value(line, lo)?, bound_value(line, hi)?));
            }
            Some("binary") => integral.extend(words.map(str::to_owned)),
            Some("multipliers") => {
                let values = words.map(|w| number(line, w)).collect::<Result<Vec<_>, _>>()?;
                multipliers = Some(values);
            }
            _ => {
                problem.add_constraint(parse_constraint(line, strip_label(content))?);
            }
        }
    }
    Ok(LpFile {
        problem,
        integral,
        multipliers,
    })
}

struct Form<'a>(&'a BTreeMap<String, Rational>);

impl std::fmt::Display for Form<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_linear_form(f, self.0)
    }
}

impl LpFile {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let keyword = match self.problem.sense {
            Sense::Min => "minimize",
            Sense::Max => "maximize",
        };
        let _ = writeln!(out, "{keyword}: {}", Form(&self.problem.objective));
        for c in &self.problem.constraints {
            let _ = writeln!(out, "{c}");
        }
        for (var, b) in &self.problem.bounds {
            let show = |v: &Option<Rational>, inf: &str| v.as_ref().map_or(inf.to_string(), |x| x.to_string());
            let _ = writeln!(out, "bounds {var} {} {}", show(&b.lower, "-inf"), show(&b.upper, "inf"));
        }
        if !self.integral.is_empty() {
            let names: Vec<&str> = self.integral.iter().map(String::as_str).collect();
            let _ = writeln!(out, "binary {}", names.join(" "));
        }
        if let Some(m) = &self.multipliers {
            let values: Vec<String> = m.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "multipliers {}", values.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn parses_full_file() {
        let text = "# demo\nmaximize: 3 x1 + 2*x2\nc1: 2 x1 + 2 x2 <= 3\nbounds x1 0 1\nbounds y -inf inf\nbinary x1 x2\nmultipliers 1/2 0.5\n";
        let f = parse_lp(text).unwrap();
        assert_eq!(f.problem.sense, Sense::Max);
        assert_eq!(f.problem.objective["x2"], int(2));
        assert_eq!(f.problem.constraints[0].relation(), Relation::Le);
        assert_eq!(f.problem.bounds["y"], Bounds::free());
        assert_eq!(f.integral.len(), 2);
        assert_eq!(f.multipliers, Some(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(parse_lp(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn negative_terms_and_rhs() {
        let c = parse_constraint(1, "2 x1 - 2 x2 >= -1").unwrap();
        assert_eq!(c.coefficient("x2"), int(-2));
        assert_eq!(c.rhs(), &int(-1));
        let c = parse_constraint(1, "-x3 + x1 >= 0").unwrap();
        assert_eq!(c.coefficient("x3"), int(-1));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_lp("minimize: x\nx + >= 1\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(parse_lp("x1 x2 >= 1").is_err());
        assert!(parse_lp("x1 >= y").is_err());
    }
}
