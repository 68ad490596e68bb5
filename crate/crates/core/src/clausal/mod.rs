//! Clauses over named 0–1 variables and the inference methods that act on
//! them: resolution, input resolution, unit propagation, the clause to
//! inequality map, Chvátal–Gomory rounding and consistency checks.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::lp::LpError;

pub mod cnf;
mod consistency;
mod cuts;

pub use consistency::{
    is_consistent_partial, is_consistent_set, is_lp_consistent_partial, is_lp_consistent_set, violates,
    Constraint, PartialAssignment, CONSISTENT_PARTIAL_LIMIT, CONSISTENT_SET_LIMIT,
};
pub use cuts::{cg_round, clause_to_inequality, elementary_closure_clause_check};

/// Derived clauses kept by [`input_resolution_derive`] before it gives up.
pub const INPUT_RESOLUTION_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClausalError {
    #[error("empty variable name")]
    EmptyVariable,
    #[error("clause contains both {0} and its negation")]
    Tautology(String),
    #[error("multiplier {0} is negative")]
    NegativeMultiplier(usize),
    #[error("row {0} is not in >= form")]
    NotGeRow(usize),
    #[error("{rows} rows but {multipliers} multipliers")]
    MultiplierCount { rows: usize, multipliers: usize },
    #[error("universe has {size} variables; the limit is {limit}")]
    UniverseTooLarge { size: usize, limit: usize },
    #[error("variable {0} is not in the universe")]
    UnknownVariable(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: impl Into<String>) -> Self {
        Literal { var: var.into(), positive: true }
    }

    pub fn neg(var: impl Into<String>) -> Self {
        Literal { var: var.into(), positive: false }
    }

    pub fn negated(&self) -> Self {
        Literal { var: self.var.clone(), positive: !self.positive }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            f.write_str(&self.var)
        } else {
            write!(f, "~{}", self.var)
        }
    }
}

/// A disjunction of literals, stored as variable → sign. Never tautologous.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    literals: BTreeMap<String, bool>,
}

impl Clause {
    pub fn new<I: IntoIterator<Item = Literal>>(literals: I) -> Result<Self, ClausalError> {
        let mut map = BTreeMap::new();
        for lit in literals {
            if lit.var.is_empty() {
                return Err(ClausalError::EmptyVariable);
            }
            match map.insert(lit.var.clone(), lit.positive) {
                Some(prev) if prev != lit.positive => return Err(ClausalError::Tautology(lit.var)),
                _ => {}
            }
        }
        Ok(Clause { literals: map })
    }

    /// Shorthand used in tests and examples: `"x1 -x3"` or `"x1 ~x3"`.
    pub fn parse(text: &str) -> Result<Self, ClausalError> {
        Clause::new(text.split_whitespace().map(|tok| match tok.strip_prefix(['-', '~', '¬']) {
            Some(var) => Literal::neg(var),
            None => Literal::pos(tok),
        }))
    }

    pub fn empty() -> Self {
        Clause::default()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.literals.len() == 1
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.literals.iter().map(|(v, &p)| Literal { var: v.clone(), positive: p })
    }

    pub fn sign_of(&self, var: &str) -> Option<bool> {
        self.literals.get(var).copied()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.literals.keys().map(String::as_str)
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.sign_of(&lit.var) == Some(lit.positive)
    }

    /// Every literal of `self` occurs in `other`.
    pub fn subsumes(&self, other: &Clause) -> bool {
        self.len() <= other.len()
            && self.literals.iter().all(|(v, p)| other.literals.get(v) == Some(p))
    }

    /// Truth value under a full assignment; `None` if a variable is missing.
    pub fn eval(&self, values: &BTreeMap<String, bool>) -> Option<bool> {
        let mut any = false;
        for (v, &p) in &self.literals {
            any |= *values.get(v)? == p;
        }
        Some(any)
    }

    fn without(&self, var: &str) -> Clause {
        let mut literals = self.literals.clone();
        literals.remove(var);
        Clause { literals }
    }
}

// Shorter clauses first so sets print units before longer clauses.
impl Ord for Clause {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.literals.cmp(&other.literals))
    }
}

impl PartialOrd for Clause {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("[]");
        }
        for (k, lit) in self.literals().enumerate() {
            if k > 0 {
                f.write_str(" v ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

/// Resolvent of `c1` and `c2` when exactly one variable has opposite signs.
pub fn resolve(c1: &Clause, c2: &Clause) -> Option<Clause> {
    let mut clash = None;
    for (v, p) in &c1.literals {
        if c2.literals.get(v).is_some_and(|q| q != p) {
            if clash.is_some() {
                return None;
            }
            clash = Some(v);
        }
    }
    let var = clash?;
    let mut out = c1.without(var);
    out.literals.extend(c2.without(var).literals);
    Some(out)
}

fn insert_unsubsumed(set: &mut BTreeSet<Clause>, clause: Clause) -> bool {
    if set.iter().any(|c| c.subsumes(&clause)) {
        return false;
    }
    set.retain(|c| !clause.subsumes(c));
    set.insert(clause);
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    /// Subsumption-free clause set.
    pub clauses: BTreeSet<Clause>,
    /// Rounds that produced at least one new clause.
    pub rounds: usize,
    /// `max_rounds` ran out before a fixpoint.
    pub truncated: bool,
}

impl Closure {
    /// Some clause of the closure subsumes `c`.
    pub fn implies(&self, c: &Clause) -> bool {
        self.clauses.iter().any(|d| d.subsumes(c))
    }

    pub fn contains_empty(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }
}

/// Closes `clauses` under pairwise resolution, discarding subsumed clauses.
pub fn resolution_closure<'a, I>(clauses: I, max_rounds: usize) -> Closure
where
    I: IntoIterator<Item = &'a Clause>,
{
    let mut set = BTreeSet::new();
    for c in clauses {
        insert_unsubsumed(&mut set, c.clone());
    }
    let mut rounds = 0;
    loop {
        let current: Vec<Clause> = set.iter().cloned().collect();
        let mut fresh = Vec::new();
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                if let Some(r) = resolve(a, b) {
                    if !current.iter().any(|c| c.subsumes(&r)) {
                        fresh.push(r);
                    }
                }
            }
        }
        if fresh.is_empty() {
            return Closure { clauses: set, rounds, truncated: false };
        }
        if rounds >= max_rounds {
            return Closure { clauses: set, rounds, truncated: true };
        }
        for r in fresh {
            insert_unsubsumed(&mut set, r);
        }
        rounds += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionStep {
    /// Earlier clause of the derivation (original or derived).
    pub left: Clause,
    /// Always a clause of the original set.
    pub right: Clause,
    pub resolvent: Clause,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<ResolutionStep>,
    /// Final clause; it subsumes the target.
    pub result: Clause,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Breadth-first input resolution: every step resolves a clause reached so
/// far with an original clause. Returns the first derivation of a clause
/// subsuming `target`, or `None` once the search is exhausted or holds
/// [`INPUT_RESOLUTION_CAP`] derived clauses.
pub fn input_resolution_derive(clauses: &[Clause], target: &Clause) -> Option<Derivation> {
    if let Some(c) = clauses.iter().find(|c| c.subsumes(target)) {
        return Some(Derivation { steps: Vec::new(), result: c.clone() });
    }
    let originals: BTreeSet<&Clause> = clauses.iter().collect();
    let mut parent: BTreeMap<Clause, (Clause, Clause)> = BTreeMap::new();
    let mut seen: BTreeSet<Clause> = clauses.iter().cloned().collect();
    let mut queue: VecDeque<Clause> = originals.iter().map(|c| (*c).clone()).collect();

    while let Some(d) = queue.pop_front() {
        for &o in &originals {
            let Some(r) = resolve(&d, o) else { continue };
            if !seen.insert(r.clone()) {
                continue;
            }
            parent.insert(r.clone(), (d.clone(), o.clone()));
            if r.subsumes(target) {
                let mut steps = Vec::new();
                let mut cur = r.clone();
                while let Some((left, right)) = parent.get(&cur) {
                    steps.push(ResolutionStep {
                        left: left.clone(),
                        right: right.clone(),
                        resolvent: cur.clone(),
                    });
                    cur = left.clone();
                }
                steps.reverse();
                return Some(Derivation { steps, result: r });
            }
            if parent.len() >= INPUT_RESOLUTION_CAP {
                return None;
            }
            queue.push_back(r);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitPropagation {
    /// Unit clauses for every implied literal followed by the unsatisfied
    /// clauses with falsified literals removed.
    pub clauses: Vec<Clause>,
    /// Implied literals in the order they were found.
    pub units: Vec<Literal>,
    pub conflict: bool,
}

/// Unit resolution to a fixpoint.
pub fn unit_propagate(clauses: &[Clause]) -> UnitPropagation {
    let mut value: BTreeMap<String, bool> = BTreeMap::new();
    let mut units = Vec::new();
    loop {
        let mut remaining = Vec::new();
        let mut new_unit = None;
        let mut conflict = false;
        for c in clauses {
            if c.literals.iter().any(|(v, p)| value.get(v) == Some(p)) {
                continue;
            }
            let reduced = Clause {
                literals: c.literals.iter().filter(|(v, _)| !value.contains_key(*v)).map(|(v, p)| (v.clone(), *p)).collect(),
            };
            if reduced.is_empty() {
                conflict = true;
            } else if reduced.is_unit() && new_unit.is_none() {
                new_unit = reduced.literals().next();
            }
            remaining.push(reduced);
        }
        match new_unit {
            Some(lit) if !conflict => {
                value.insert(lit.var.clone(), lit.positive);
                units.push(lit);
            }
            _ => {
                let mut out: Vec<Clause> = units.iter().map(|l| Clause::new([l.clone()]).expect("unit")).collect();
                let mut kept = BTreeSet::new();
                for c in remaining {
                    if kept.insert(c.clone()) {
                        out.push(c);
                    }
                }
                return UnitPropagation { clauses: out, units, conflict };
            }
        }
    }
}
