//! Instance files:
//!
//! ```text
//! atoms A B C
//! premise A = 9/10
//! premise A -> B = 0.8
//! premise B -> C = 0.4
//! query C
//! ```
//!
//! Premises may use `>=` or `<=` instead of `=`. `#` starts a comment.

use std::fmt::Write as _;

use super::formula::parse_formula;
use super::{Premise, ProbLogicInstance};
use crate::error::ParseError;
use crate::lp::Relation;
use crate::rational::parse_rational;

fn split_relation(text: &str) -> Option<(&str, Relation, &str)> {
    for (symbol, relation) in [(">=", Relation::Ge), ("<=", Relation::Le), ("=", Relation::Eq)] {
        if let Some(pos) = text.rfind(symbol) {
            return Some((&text[..pos], relation, &text[pos + symbol.len()..]));
        }
    }
    None
}

pub fn parse_instance(text: &str) -> Result<ProbLogicInstance, ParseError> {
    let mut atoms: Option<Vec<String>> = None;
    let mut premises = Vec::new();
    let mut query = None;
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        match keyword {
            "atoms" => {
                if atoms.is_some() {
                    return Err(ParseError::new(line, "duplicate atoms line"));
                }
                atoms = Some(rest.split_whitespace().map(str::to_owned).collect());
            }
            "premise" => {
                let Some((formula, relation, prob)) = split_relation(rest) else {
                    return Err(ParseError::new(line, "premise needs '= probability'"));
                };
                let probability = parse_rational(prob).map_err(|e| ParseError::new(line, e))?;
                premises.push(Premise {
                    formula: parse_formula(line, formula)?,
                    relation,
                    probability,
                });
            }
            "query" => {
                if query.is_some() {
                    return Err(ParseError::new(line, "duplicate query line"));
                }
                query = Some(parse_formula(line, rest)?);
            }
            other => return Err(ParseError::new(line, format!("unknown keyword {other:?}"))),
        }
    }
    let atoms = atoms.ok_or_else(|| ParseError::new(last_line, "missing atoms line"))?;
    let query = query.ok_or_else(|| ParseError::new(last_line, "missing query line"))?;
    Ok(ProbLogicInstance {
        atoms,
        premises,
        query,
    })
}

pub fn to_text(inst: &ProbLogicInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "atoms {}", inst.atoms.join(" "));
    for p in &inst.premises {
        let _ = writeln!(out, "premise {} {} {}", p.formula, p.relation, p.probability);
    }
    let _ = writeln!(out, "query {}", inst.query);
    out
}
