//! Exact rational linear programming.
//!
//! Problems are stated over named variables. Unless [`Bounds`] say otherwise a
//! variable is nonnegative with no upper bound. [`lp_solve`] runs a two-phase
//! dense-tableau simplex with Bland's rule and returns either an optimal
//! point with dual values or a Farkas certificate of infeasibility.
//! [`milp_solve`] adds best-first branch-and-bound over 0–1 variables.

mod milp;
mod simplex;
pub mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

pub use milp::{milp_solve, milp_solve_lazy, MilpResult, MilpStatus};
pub use simplex::lp_solve;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("variable names must be nonempty")]
    EmptyVariableName,
    #[error("objective variable {0:?} appears in no constraint and has no bounds")]
    UnknownObjectiveVariable(String),
    #[error("integral variable {0:?} does not occur in the problem")]
    UnknownIntegralVariable(String),
    #[error("LP relaxation is unbounded")]
    UnboundedRelaxation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Ge => lhs >= rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `Σ a_j x_j (≥ | ≤ | =) rhs`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearConstraint {
    coefficients: BTreeMap<String, Rational>,
    relation: Relation,
    rhs: Rational,
}

impl LinearConstraint {
    /// Builds a constraint, summing repeated variables and dropping zeros.
    pub fn new<I, S>(terms: I, relation: Relation, rhs: Rational) -> Result<Self, LpError>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut coefficients: BTreeMap<String, Rational> = BTreeMap::new();
        for (var, coef) in terms {
            let var = var.into();
            if var.is_empty() {
                return Err(LpError::EmptyVariableName);
            }
            *coefficients.entry(var).or_insert_with(Rational::zero) += coef;
        }
        coefficients.retain(|_, c| !c.is_zero());
        Ok(LinearConstraint {
            coefficients,
            relation,
            rhs,
        })
    }

    pub fn ge<I, S>(terms: I, rhs: Rational) -> Result<Self, LpError>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        Self::new(terms, Relation::Ge, rhs)
    }

    pub fn le<I, S>(terms: I, rhs: Rational) -> Result<Self, LpError>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        Self::new(terms, Relation::Le, rhs)
    }

    pub fn eq<I, S>(terms: I, rhs: Rational) -> Result<Self, LpError>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        Self::new(terms, Relation::Eq, rhs)
    }

    pub fn coefficients(&self) -> &BTreeMap<String, Rational> {
        &self.coefficients
    }

    pub fn coefficient(&self, var: &str) -> Rational {
        self.coefficients
            .get(var)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn rhs(&self) -> &Rational {
        &self.rhs
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.coefficients.keys().map(String::as_str)
    }

    /// Left-hand side at `values`; `None` if some variable has no value.
    pub fn lhs_at(&self, values: &BTreeMap<String, Rational>) -> Option<Rational> {
        let mut total = Rational::zero();
        for (var, coef) in &self.coefficients {
            total += coef * values.get(var)?;
        }
        Some(total)
    }

    pub fn is_satisfied_by(&self, values: &BTreeMap<String, Rational>) -> Option<bool> {
        self.lhs_at(values)
            .map(|lhs| self.relation.holds(&lhs, &self.rhs))
    }

    /// Rows in `≥` form equivalent to this constraint (two for an equality).
    pub fn to_ge_rows(&self) -> Vec<LinearConstraint> {
        let negated = || LinearConstraint {
            coefficients: self
                .coefficients
                .iter()
                .map(|(v, c)| (v.clone(), -c))
                .collect(),
            relation: Relation::Ge,
            rhs: -&self.rhs,
        };
        match self.relation {
            Relation::Ge => vec![self.clone()],
            Relation::Le => vec![negated()],
            Relation::Eq => {
                let mut ge = self.clone();
                ge.relation = Relation::Ge;
                vec![ge, negated()]
            }
        }
    }
}

pub(crate) fn write_linear_form(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<String, Rational>,
) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (k, (var, coef)) in terms.iter().enumerate() {
        let magnitude = coef.abs();
        match (k, coef.is_negative()) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        if magnitude.is_integer() && magnitude.to_integer() == 1.into() {
            write!(f, "{var}")?;
        } else {
            write!(f, "{magnitude} {var}")?;
        }
    }
    Ok(())
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear_form(f, &self.coefficients)?;
        write!(f, " {} {}", self.relation, self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Min,
    Max,
}

/// Variable bounds; `None` means unbounded in that direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bounds {
    pub fn new(lower: Option<Rational>, upper: Option<Rational>) -> Self {
        Bounds { lower, upper }
    }

    pub fn free() -> Self {
        Bounds::new(None, None)
    }

    pub fn binary() -> Self {
        Bounds::new(Some(Rational::zero()), Some(num::One::one()))
    }

    pub fn fixed(value: Rational) -> Self {
        Bounds::new(Some(value.clone()), Some(value))
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| value >= l)
            && self.upper.as_ref().is_none_or(|u| value <= u)
    }
}

impl Default for Bounds {
    /// Nonnegative and unbounded above.
    fn default() -> Self {
        Bounds::new(Some(Rational::zero()), None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: BTreeMap<String, Rational>,
    pub constraints: Vec<LinearConstraint>,
    pub bounds: BTreeMap<String, Bounds>,
}

impl LpProblem {
    pub fn new(sense: Sense) -> Self {
        LpProblem {
            sense,
            objective: BTreeMap::new(),
            constraints: Vec::new(),
            bounds: BTreeMap::new(),
        }
    }

    pub fn minimize() -> Self {
        Self::new(Sense::Min)
    }

    pub fn maximize() -> Self {
        Self::new(Sense::Max)
    }

    pub fn set_objective<I, S>(&mut self, terms: I) -> Result<(), LpError>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut objective: BTreeMap<String, Rational> = BTreeMap::new();
        for (var, coef) in terms {
            let var = var.into();
            if var.is_empty() {
                return Err(LpError::EmptyVariableName);
            }
            *objective.entry(var).or_insert_with(Rational::zero) += coef;
        }
        objective.retain(|_, c| !c.is_zero());
        self.objective = objective;
        Ok(())
    }

    pub fn add_constraint(&mut self, constraint: LinearConstraint) -> usize {
        self.constraints.push(constraint);
        self.constraints.len() - 1
    }

    pub fn set_bounds(&mut self, var: impl Into<String>, bounds: Bounds) {
        self.bounds.insert(var.into(), bounds);
    }

    pub fn bounds_of(&self, var: &str) -> Bounds {
        self.bounds.get(var).cloned().unwrap_or_default()
    }

    /// Every variable mentioned anywhere in the problem, sorted.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars: BTreeSet<String> = self.bounds.keys().cloned().collect();
        for c in &self.constraints {
            vars.extend(c.variables().map(str::to_owned));
        }
        vars.extend(self.objective.keys().cloned());
        vars
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let mut known: BTreeSet<&str> = self.bounds.keys().map(String::as_str).collect();
        for c in &self.constraints {
            known.extend(c.variables());
        }
        if known.contains("") {
            return Err(LpError::EmptyVariableName);
        }
        for var in self.objective.keys() {
            if !known.contains(var.as_str()) {
                return Err(LpError::UnknownObjectiveVariable(var.clone()));
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, values: &BTreeMap<String, Rational>) -> Rational {
        self.objective
            .iter()
            .map(|(v, c)| c * values.get(v).cloned().unwrap_or_else(Rational::zero))
            .sum()
    }

    /// True when `values` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, values: &BTreeMap<String, Rational>) -> bool {
        let zero = Rational::zero();
        let value = |v: &str| values.get(v).unwrap_or(&zero);
        self.variables()
            .iter()
            .all(|v| self.bounds_of(v).contains(value(v)))
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c
                    .coefficients()
                    .iter()
                    .map(|(v, a)| a * value(v))
                    .sum();
                c.relation().holds(&lhs, c.rhs())
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Proof of infeasibility.
///
/// Every row is read in `≥` form (a `≤` row contributes `-a·x ≥ -b`), as are
/// the bounds (`x ≥ l` and `-x ≥ -u`). Multipliers on inequality rows and
/// bounds are nonnegative, equality rows take any sign. The weighted sum has
/// all-zero variable coefficients and a strictly positive right-hand side,
/// i.e. it reads `0 ≥ positive`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub rows: Vec<Rational>,
    pub lower: BTreeMap<String, Rational>,
    pub upper: BTreeMap<String, Rational>,
}

impl FarkasCertificate {
    /// Coefficients and right-hand side of the certified combination.
    pub fn combination(&self, problem: &LpProblem) -> (BTreeMap<String, Rational>, Rational) {
        let mut coefs: BTreeMap<String, Rational> = BTreeMap::new();
        let mut rhs = Rational::zero();
        for (row, mult) in problem.constraints.iter().zip(&self.rows) {
            let sign = if row.relation() == Relation::Le {
                -mult.clone()
            } else {
                mult.clone()
            };
            for (v, a) in row.coefficients() {
                *coefs.entry(v.clone()).or_insert_with(Rational::zero) += &sign * a;
            }
            rhs += &sign * row.rhs();
        }
        for (v, mult) in &self.lower {
            if let Some(l) = problem.bounds_of(v).lower {
                *coefs.entry(v.clone()).or_insert_with(Rational::zero) += mult;
                rhs += mult * l;
            }
        }
        for (v, mult) in &self.upper {
            if let Some(u) = problem.bounds_of(v).upper {
                *coefs.entry(v.clone()).or_insert_with(Rational::zero) -= mult;
                rhs -= mult * u;
            }
        }
        coefs.retain(|_, c| !c.is_zero());
        (coefs, rhs)
    }

    pub fn verify(&self, problem: &LpProblem) -> bool {
        if self.rows.len() != problem.constraints.len() {
            return false;
        }
        let signs_ok = problem
            .constraints
            .iter()
            .zip(&self.rows)
            .all(|(row, m)| row.relation() == Relation::Eq || !m.is_negative());
        let bounds_ok = self.lower.iter().all(|(v, m)| {
            !m.is_negative() && (m.is_zero() || problem.bounds_of(v).lower.is_some())
        }) && self.upper.iter().all(|(v, m)| {
            !m.is_negative() && (m.is_zero() || problem.bounds_of(v).upper.is_some())
        });
        let (coefs, rhs) = self.combination(problem);
        signs_ok && bounds_ok && coefs.is_empty() && rhs.is_positive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Objective value when optimal.
    pub value: Option<Rational>,
    /// Primal point when optimal; empty otherwise.
    pub primal: BTreeMap<String, Rational>,
    /// Shadow price of each constraint (`∂ value / ∂ rhs`) when optimal.
    pub duals: Vec<Rational>,
    /// `c_j - Σ_i dual_i a_ij` when optimal.
    pub reduced_costs: BTreeMap<String, Rational>,
    pub farkas: Option<FarkasCertificate>,
}

impl LpResult {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Objective of the dual solution encoded by `duals` and `reduced_costs`,
    /// or `None` when they are not dual feasible for `problem`.
    ///
    /// Equal to `value` at every optimum returned by [`lp_solve`].
    pub fn dual_value(&self, problem: &LpProblem) -> Option<Rational> {
        if !self.is_optimal() || self.duals.len() != problem.constraints.len() {
            return None;
        }
        let minimize = problem.sense == Sense::Min;
        let mut total = Rational::zero();
        for (row, y) in problem.constraints.iter().zip(&self.duals) {
            let ok = match (row.relation(), minimize) {
                (Relation::Eq, _) => true,
                (Relation::Ge, true) | (Relation::Le, false) => !y.is_negative(),
                (Relation::Le, true) | (Relation::Ge, false) => !y.is_positive(),
            };
            if !ok {
                return None;
            }
            total += y * row.rhs();
        }
        for var in problem.variables() {
            let expected = problem
                .objective
                .get(&var)
                .cloned()
                .unwrap_or_else(Rational::zero)
                - problem
                    .constraints
                    .iter()
                    .zip(&self.duals)
                    .map(|(row, y)| y * row.coefficient(&var))
                    .sum::<Rational>();
            let rc = self
                .reduced_costs
                .get(&var)
                .cloned()
                .unwrap_or_else(Rational::zero);
            if rc != expected {
                return None;
            }
            if rc.is_zero() {
                continue;
            }
            let bounds = problem.bounds_of(&var);
            let wants_lower = rc.is_positive() == minimize;
            let bound = if wants_lower { bounds.lower } else { bounds.upper };
            total += rc * bound?;
        }
        Some(total)
    }
}
