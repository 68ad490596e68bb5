//! Clause files in a DIMACS-like layout with named variables:
//!
//! ```text
//! c comment
//! p cnf 3 2
//! x1 x2 x3
//! x1 -x3
//! ```
//!
//! The header gives the number of distinct variables and of clauses. A
//! literal is a name, negated by a leading `-` or `~`. A trailing `0` is
//! accepted and a line holding only `0` is the empty clause.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Clause, Literal};
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseFile {
    /// Sorted distinct variable names.
    pub variables: Vec<String>,
    pub clauses: Vec<Clause>,
}

fn parse_literal(line: usize, tok: &str) -> Result<Literal, ParseError> {
    let (positive, name) = match tok.strip_prefix(['-', '~']) {
        Some(rest) => (false, rest),
        None => (true, tok),
    };
    if name.is_empty() || name.starts_with(['-', '~']) {
        return Err(ParseError::new(line, format!("bad literal {tok:?}")));
    }
    Ok(Literal { var: name.to_string(), positive })
}

pub fn parse_cnf(text: &str) -> Result<ClauseFile, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut variables = BTreeSet::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.trim();
        if content.is_empty() || content == "c" || content.starts_with("c ") || content.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens[0] == "p" {
            if header.is_some() {
                return Err(ParseError::new(line, "duplicate header"));
            }
            let [_, "cnf", nv, nc] = tokens[..] else {
                return Err(ParseError::new(line, "header must read 'p cnf <variables> <clauses>'"));
            };
            let parse = |s: &str| s.parse::<usize>().map_err(|_| ParseError::new(line, format!("bad count {s:?}")));
            header = Some((parse(nv)?, parse(nc)?, line));
            continue;
        }
        if header.is_none() {
            return Err(ParseError::new(line, "clause before the 'p cnf' header"));
        }
        let body = match tokens.split_last() {
            Some((&"0", rest)) => rest,
            _ => &tokens[..],
        };
        let literals = body.iter().map(|t| parse_literal(line, t)).collect::<Result<Vec<_>, _>>()?;
        let clause = Clause::new(literals).map_err(|e| ParseError::new(line, e.to_string()))?;
        variables.extend(clause.variables().map(str::to_owned));
        clauses.push(clause);
    }
    let (nv, nc, hline) = header.ok_or_else(|| ParseError::new(1, "missing 'p cnf' header"))?;
    if nc != clauses.len() {
        return Err(ParseError::new(hline, format!("header declares {nc} clauses, found {}", clauses.len())));
    }
    if nv != variables.len() {
        return Err(ParseError::new(hline, format!("header declares {nv} variables, found {}", variables.len())));
    }
    Ok(ClauseFile { variables: variables.into_iter().collect(), clauses })
}

pub fn to_cnf(clauses: &[Clause]) -> String {
    let variables: BTreeSet<&str> = clauses.iter().flat_map(Clause::variables).collect();
    let mut out = format!("p cnf {} {}\n", variables.len(), clauses.len());
    for c in clauses {
        if c.is_empty() {
            out.push_str("0\n");
            continue;
        }
        let lits: Vec<String> = c
            .literals()
            .map(|l| if l.positive { l.var } else { format!("-{}", l.var) })
            .collect();
        let _ = writeln!(out, "{}", lits.join(" "));
    }
    out
}
