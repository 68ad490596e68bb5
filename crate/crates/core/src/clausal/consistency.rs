//! Consistency and LP-consistency of 0–1 constraint sets.
//!
//! A partial assignment is consistent with a set when some completion
//! satisfies every constraint, and LP-consistent when the LP relaxation with
//! the assigned values fixed is feasible. A set is consistent when every
//! partial assignment that violates no constraint is consistent, and
//! LP-consistent when every LP-consistent partial assignment is consistent.
//!
//! Set-level checks enumerate partial assignments over the sorted universe
//! with the first variable most significant and unassigned < 0 < 1, so the
//! reported witness is the first failure in that order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Zero};

use super::{clause_to_inequality, ClausalError, Clause};
use crate::lp::{lp_solve, Bounds, LinearConstraint, LpProblem, LpStatus, Relation};
use crate::rational::Rational;

/// Universe size accepted by [`is_consistent_partial`].
pub const CONSISTENT_PARTIAL_LIMIT: usize = 25;
/// Universe size accepted by the set-level checks.
pub const CONSISTENT_SET_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    Clause(Clause),
    Linear(LinearConstraint),
}

impl Constraint {
    pub fn variables(&self) -> Vec<&str> {
        match self {
            Constraint::Clause(c) => c.variables().collect(),
            Constraint::Linear(l) => l.variables().collect(),
        }
    }

    /// The constraint as a linear row over 0–1 variables.
    pub fn to_linear(&self) -> LinearConstraint {
        match self {
            Constraint::Clause(c) => clause_to_inequality(c),
            Constraint::Linear(l) => l.clone(),
        }
    }
}

impl From<Clause> for Constraint {
    fn from(c: Clause) -> Self {
        Constraint::Clause(c)
    }
}

impl From<LinearConstraint> for Constraint {
    fn from(l: LinearConstraint) -> Self {
        Constraint::Linear(l)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Clause(c) => write!(f, "{c}"),
            Constraint::Linear(l) => write!(f, "{l}"),
        }
    }
}

/// 0–1 values for a subset of the variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PartialAssignment(pub BTreeMap<String, bool>);

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<bool> {
        self.0.get(var).copied()
    }

    pub fn set(&mut self, var: impl Into<String>, value: bool) {
        self.0.insert(var.into(), value);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<(S, bool)> for PartialAssignment {
    fn from_iter<I: IntoIterator<Item = (S, bool)>>(iter: I) -> Self {
        PartialAssignment(iter.into_iter().map(|(v, b)| (v.into(), b)).collect())
    }
}

/// Written as `(x1,x2)=(0,0)`; the empty assignment is `()=()`.
impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<&str> = self.0.keys().map(String::as_str).collect();
        let vals: Vec<&str> = self.0.values().map(|&b| if b { "1" } else { "0" }).collect();
        write!(f, "({})=({})", vars.join(","), vals.join(","))
    }
}

/// True iff `pa` assigns every variable of `constraint` and falsifies it.
pub fn violates(pa: &PartialAssignment, constraint: &Constraint) -> bool {
    match constraint {
        Constraint::Clause(c) => c.literals().all(|l| pa.get(&l.var) == Some(!l.positive)),
        Constraint::Linear(l) => {
            let values: BTreeMap<String, Rational> = pa
                .0
                .iter()
                .map(|(v, &b)| (v.clone(), if b { Rational::one() } else { Rational::zero() }))
                .collect();
            l.is_satisfied_by(&values) == Some(false)
        }
    }
}

/// A constraint over universe indices.
struct Row {
    terms: Vec<(usize, Rational)>,
    relation: Relation,
    rhs: Rational,
}

impl Row {
    /// `None` while some variable is unassigned.
    fn holds(&self, values: &[Option<bool>]) -> Option<bool> {
        let mut lhs = Rational::zero();
        for (i, a) in &self.terms {
            if values[*i]? {
                lhs += a;
            }
        }
        Some(self.relation.holds(&lhs, &self.rhs))
    }
}

struct Compiled {
    universe: Vec<String>,
    rows: Vec<Row>,
    /// Rows mentioning each variable.
    touching: Vec<Vec<usize>>,
}

impl Compiled {
    fn new(constraints: &[Constraint], universe: &[String], limit: usize) -> Result<Self, ClausalError> {
        let universe: Vec<String> = universe.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        if universe.len() > limit {
            return Err(ClausalError::UniverseTooLarge { size: universe.len(), limit });
        }
        let index: BTreeMap<&str, usize> = universe.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut rows = Vec::new();
        let mut touching = vec![Vec::new(); universe.len()];
        for c in constraints {
            let lin = c.to_linear();
            let mut terms = Vec::new();
            for (v, a) in lin.coefficients() {
                let &i = index.get(v.as_str()).ok_or_else(|| ClausalError::UnknownVariable(v.clone()))?;
                touching[i].push(rows.len());
                terms.push((i, a.clone()));
            }
            rows.push(Row { terms, relation: lin.relation(), rhs: lin.rhs().clone() });
        }
        Ok(Compiled { universe, rows, touching })
    }

    fn values_of(&self, pa: &PartialAssignment) -> Result<Vec<Option<bool>>, ClausalError> {
        let mut values = vec![None; self.universe.len()];
        for (v, &b) in &pa.0 {
            let i = self
                .universe
                .iter()
                .position(|u| u == v)
                .ok_or_else(|| ClausalError::UnknownVariable(v.clone()))?;
            values[i] = Some(b);
        }
        Ok(values)
    }

    fn violated(&self, values: &[Option<bool>]) -> bool {
        self.rows.iter().any(|r| r.holds(values) == Some(false))
    }

    fn extend(&self, values: &mut Vec<Option<bool>>, k: usize) -> bool {
        if k == values.len() {
            return true;
        }
        if values[k].is_some() {
            return self.extend(values, k + 1);
        }
        for b in [false, true] {
            values[k] = Some(b);
            let ok = self.touching[k].iter().all(|&r| self.rows[r].holds(values) != Some(false));
            if ok && self.extend(values, k + 1) {
                values[k] = None;
                return true;
            }
        }
        values[k] = None;
        false
    }

    /// Every partial assignment in code order, with `consistent[code]`.
    fn consistency_table(&self) -> Vec<bool> {
        let n = self.universe.len();
        let total = 3usize.pow(n as u32);
        let mut consistent = vec![false; total];
        let weight: Vec<usize> = (0..n).map(|i| 3usize.pow((n - 1 - i) as u32)).collect();
        for full in 0u32..(1 << n) {
            let values: Vec<Option<bool>> = (0..n).map(|i| Some(full >> (n - 1 - i) & 1 == 1)).collect();
            if self.violated(&values) {
                continue;
            }
            for keep in 0u32..(1 << n) {
                let mut code = 0;
                for i in 0..n {
                    if keep >> i & 1 == 1 {
                        code += weight[i] * if values[i] == Some(true) { 2 } else { 1 };
                    }
                }
                consistent[code] = true;
            }
        }
        consistent
    }

    fn decode(&self, mut code: usize) -> Vec<Option<bool>> {
        let n = self.universe.len();
        let mut values = vec![None; n];
        for i in (0..n).rev() {
            values[i] = match code % 3 {
                0 => None,
                1 => Some(false),
                _ => Some(true),
            };
            code /= 3;
        }
        values
    }

    fn assignment(&self, values: &[Option<bool>]) -> PartialAssignment {
        self.universe
            .iter()
            .zip(values)
            .filter_map(|(v, b)| b.map(|b| (v.clone(), b)))
            .collect()
    }
}

/// True iff some 0–1 completion of `pa` over `universe` satisfies every
/// constraint. Depth-first with pruning on violated constraints.
pub fn is_consistent_partial(
    constraints: &[Constraint],
    pa: &PartialAssignment,
    universe: &[String],
) -> Result<bool, ClausalError> {
    let compiled = Compiled::new(constraints, universe, CONSISTENT_PARTIAL_LIMIT)?;
    let mut values = compiled.values_of(pa)?;
    if compiled.violated(&values) {
        return Ok(false);
    }
    Ok(compiled.extend(&mut values, 0))
}

/// Whether every partial assignment that violates no constraint is
/// consistent; otherwise the first one that is not.
pub fn is_consistent_set(
    constraints: &[Constraint],
    universe: &[String],
) -> Result<(bool, Option<PartialAssignment>), ClausalError> {
    let compiled = Compiled::new(constraints, universe, CONSISTENT_SET_LIMIT)?;
    let consistent = compiled.consistency_table();
    for (code, &ok) in consistent.iter().enumerate() {
        if ok {
            continue;
        }
        let values = compiled.decode(code);
        if !compiled.violated(&values) {
            return Ok((false, Some(compiled.assignment(&values))));
        }
    }
    Ok((true, None))
}

fn relaxation(constraints: &[Constraint], pa: &PartialAssignment) -> LpProblem {
    let mut lp = LpProblem::minimize();
    for c in constraints {
        lp.add_constraint(c.to_linear());
    }
    for v in lp.variables() {
        lp.set_bounds(v, Bounds::binary());
    }
    for (v, &b) in &pa.0 {
        let value = if b { Rational::one() } else { Rational::zero() };
        lp.set_bounds(v.clone(), Bounds::fixed(value));
    }
    lp
}

/// True iff the LP relaxation (every variable in [0, 1], `pa` fixed) is
/// feasible.
pub fn is_lp_consistent_partial(constraints: &[Constraint], pa: &PartialAssignment) -> bool {
    let lp = relaxation(constraints, pa);
    let result = lp_solve(&lp).expect("constraints carry nonempty variable names");
    result.status != LpStatus::Infeasible
}

/// Whether every LP-consistent partial assignment is consistent; otherwise
/// the first LP-consistent one that is not.
pub fn is_lp_consistent_set(
    constraints: &[Constraint],
    universe: &[String],
) -> Result<(bool, Option<PartialAssignment>), ClausalError> {
    let compiled = Compiled::new(constraints, universe, CONSISTENT_SET_LIMIT)?;
    let consistent = compiled.consistency_table();
    for (code, &ok) in consistent.iter().enumerate() {
        if ok {
            continue;
        }
        let values = compiled.decode(code);
        // A violated constraint already makes the relaxation infeasible.
        if compiled.violated(&values) {
            continue;
        }
        let pa = compiled.assignment(&values);
        if is_lp_consistent_partial(constraints, &pa) {
            return Ok((false, Some(pa)));
        }
    }
    Ok((true, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ge(terms: &[(&str, i64)], rhs: i64) -> Constraint {
        LinearConstraint::ge(terms.iter().map(|(v, a)| (*v, int(*a))), int(rhs)).unwrap().into()
    }

    fn pa(pairs: &[(&str, bool)]) -> PartialAssignment {
        pairs.iter().map(|(v, b)| (*v, *b)).collect()
    }

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn eq4() -> Vec<Constraint> {
        vec![ge(&[("x1", 1), ("x2", 1), ("x3", 1)], 1), ge(&[("x2", 1), ("x3", -1)], 0)]
    }

    fn lp_example() -> Vec<Constraint> {
        vec![ge(&[("x1", 2), ("x2", 2)], 1), ge(&[("x1", 2), ("x2", -2)], -1)]
    }

    #[test]
    fn partial_consistency() {
        let u = vars(&["x1", "x2", "x3"]);
        assert!(!is_consistent_partial(&eq4(), &pa(&[("x1", false), ("x2", false)]), &u).unwrap());
        assert!(is_consistent_partial(&eq4(), &pa(&[]), &u).unwrap());
        assert!(is_consistent_partial(&eq4(), &pa(&[("x1", true)]), &u).unwrap());
    }

    #[test]
    fn violation() {
        let p = pa(&[("x1", false), ("x2", false)]);
        assert!(!violates(&p, &eq4()[0]));
        assert!(violates(&p, &ge(&[("x1", 1), ("x2", 1)], 1)));
        assert!(violates(&pa(&[("x2", false), ("x3", true)]), &eq4()[1]));
        assert!(violates(&pa(&[("a", false)]), &Clause::parse("a").unwrap().into()));
    }

    #[test]
    fn set_consistency() {
        let u = vars(&["x1", "x2", "x3"]);
        let (ok, witness) = is_consistent_set(&eq4(), &u).unwrap();
        assert!(!ok);
        assert_eq!(witness, Some(pa(&[("x1", false), ("x2", false)])));

        let mut fixed = eq4();
        fixed.push(ge(&[("x1", 1), ("x2", 1)], 1));
        assert_eq!(is_consistent_set(&fixed, &u).unwrap(), (true, None));
        assert_eq!(is_consistent_set(&[], &u).unwrap(), (true, None));
    }

    #[test]
    fn lp_consistency() {
        let s = lp_example();
        assert!(is_lp_consistent_partial(&s, &pa(&[("x1", false)])));
        assert!(is_lp_consistent_partial(&s, &pa(&[("x1", true), ("x2", false)])));
        assert!(!is_lp_consistent_partial(&s, &pa(&[("x1", false), ("x2", false)])));

        let never = vec![ge(&[("x1", 1)], 2)];
        assert!(!is_lp_consistent_partial(&never, &pa(&[])));
        assert!(!is_lp_consistent_partial(&never, &pa(&[("x1", true)])));

        let u = vars(&["x1", "x2"]);
        let (ok, witness) = is_lp_consistent_set(&s, &u).unwrap();
        assert!(!ok);
        assert_eq!(witness, Some(pa(&[("x1", false)])));

        assert_eq!(is_lp_consistent_set(&[ge(&[("x1", 1)], 1)], &vars(&["x1"])).unwrap(), (true, None));

        let mut cut = s.clone();
        cut.push(ge(&[("x1", 1)], 1));
        assert_eq!(is_lp_consistent_set(&cut, &u).unwrap(), (true, None));
    }

    #[test]
    fn universe_checks() {
        let big: Vec<String> = (0..13).map(|i| format!("v{i}")).collect();
        assert_eq!(
            is_consistent_set(&[], &big),
            Err(ClausalError::UniverseTooLarge { size: 13, limit: 12 })
        );
        assert_eq!(
            is_consistent_partial(&eq4(), &pa(&[]), &vars(&["x1", "x2"])),
            Err(ClausalError::UnknownVariable("x3".into()))
        );
        assert!(is_consistent_partial(&[], &pa(&[("y", true)]), &vars(&["x1"])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(pa(&[("x1", false), ("x2", true)]).to_string(), "(x1,x2)=(0,1)");
    }
}
