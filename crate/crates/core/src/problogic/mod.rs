//! Probability logic as linear programming.
//!
//! Each truth assignment `v` to the declared atoms gets an unknown
//! probability `p_v ≥ 0`. A premise "φ has probability π" becomes the row
//! `Σ_{v ⊨ φ} p_v = π`, the probabilities sum to one, and minimizing /
//! maximizing `Σ_{v ⊨ query} p_v` yields the tightest interval for the query.
//!
//! Variables are named `p_<bits>` with the first declared atom as the leftmost
//! bit, so with atoms `A B C` the column `p_101` is the assignment
//! `A = 1, B = 0, C = 1`.

mod colgen;
mod formula;
pub mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::lp::{lp_solve, LinearConstraint, LpError, LpProblem, LpStatus, Relation, Sense};
use crate::rational::Rational;

pub use colgen::{colgen_solve, query_bounds_colgen, ColgenOutcome};
pub use formula::{eval_formula, Formula};

/// Largest atom count for which the assignment LP (or pricing by
/// enumeration) is attempted.
pub const MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbLogicError {
    #[error("atom {0:?} has no truth value")]
    UnassignedAtom(String),
    #[error("atom {0:?} is used but not declared")]
    UndeclaredAtom(String),
    #[error("atom {0:?} is declared twice")]
    DuplicateAtom(String),
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(Rational),
    #[error("{count} atoms exceed the enumeration limit of {limit}; use column generation")]
    TooManyAtoms { count: usize, limit: usize },
    #[error("premise probabilities are inconsistent")]
    Inconsistent(InconsistencyCertificate),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// A premise `P(formula) (= | ≥ | ≤) probability`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Premise {
    pub formula: Formula,
    pub relation: Relation,
    pub probability: Rational,
}

impl Premise {
    pub fn exactly(formula: Formula, probability: Rational) -> Self {
        Premise {
            formula,
            relation: Relation::Eq,
            probability,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbLogicInstance {
    pub atoms: Vec<String>,
    pub premises: Vec<Premise>,
    pub query: Formula,
}

impl ProbLogicInstance {
    pub fn validate(&self) -> Result<(), ProbLogicError> {
        let mut declared = BTreeSet::new();
        for a in &self.atoms {
            if !declared.insert(a.as_str()) {
                return Err(ProbLogicError::DuplicateAtom(a.clone()));
            }
        }
        for p in &self.premises {
            if p.probability.is_negative() || p.probability > Rational::one() {
                return Err(ProbLogicError::ProbabilityOutOfRange(p.probability.clone()));
            }
        }
        let formulas = self.premises.iter().map(|p| &p.formula).chain([&self.query]);
        for f in formulas {
            if let Some(a) = f.atoms().into_iter().find(|a| !declared.contains(a)) {
                return Err(ProbLogicError::UndeclaredAtom(a.to_string()));
            }
        }
        Ok(())
    }

    pub fn assignment_count(&self) -> u64 {
        1u64 << self.atoms.len()
    }

    /// Column name of assignment `index`, e.g. `p_011`.
    pub fn column_name(&self, index: u64) -> String {
        let n = self.atoms.len();
        let bits: String = (0..n)
            .map(|k| if (index >> (n - 1 - k)) & 1 == 1 { '1' } else { '0' })
            .collect();
        format!("p_{bits}")
    }

    /// Truth value of `f` under assignment `index`.
    pub fn holds(&self, f: &Formula, index: u64) -> Result<bool, ProbLogicError> {
        let n = self.atoms.len();
        f.eval_with(&|a: &str| {
            self.atoms
                .iter()
                .position(|x| x == a)
                .map(|k| (index >> (n - 1 - k)) & 1 == 1)
        })
    }

    fn check_size(&self) -> Result<(), ProbLogicError> {
        if self.atoms.len() > MAX_ATOMS {
            return Err(ProbLogicError::TooManyAtoms {
                count: self.atoms.len(),
                limit: MAX_ATOMS,
            });
        }
        Ok(())
    }
}

/// Satisfaction table: one row per premise, then one for the query.
pub(crate) struct TruthTable {
    pub rows: Vec<Vec<bool>>,
}

impl TruthTable {
    pub fn build(inst: &ProbLogicInstance) -> Result<Self, ProbLogicError> {
        let formulas = inst.premises.iter().map(|p| &p.formula).chain([&inst.query]);
        let count = inst.assignment_count();
        let rows = formulas
            .map(|f| (0..count).map(|v| inst.holds(f, v)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TruthTable { rows })
    }

    pub fn query(&self) -> &[bool] {
        self.rows.last().expect("query row")
    }
}

/// Closed interval `[lo, hi] ⊆ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl fmt::Display for ProbabilityInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Proof that no distribution over truth assignments meets the premises.
///
/// With weights `w_i` on the premise rows and `w_0` on the normalization row
/// (nonnegative on `≥` premises, nonpositive on `≤` premises, free on
/// equalities), every assignment `v` satisfies
/// `Σ_{i: v ⊨ φ_i} w_i + w_0 ≤ 0`, while `Σ_i w_i π_i + w_0 > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InconsistencyCertificate {
    pub premise_weights: Vec<Rational>,
    pub normalization_weight: Rational,
}

impl InconsistencyCertificate {
    pub(crate) fn from_farkas(rows: &[Rational], premises: &[Premise]) -> Self {
        let premise_weights = premises
            .iter()
            .zip(rows)
            .map(|(p, m)| if p.relation == Relation::Le { -m } else { m.clone() })
            .collect();
        InconsistencyCertificate {
            premise_weights,
            normalization_weight: rows[premises.len()].clone(),
        }
    }

    /// Checks the certificate by enumerating every assignment.
    pub fn verify(&self, inst: &ProbLogicInstance) -> bool {
        if self.premise_weights.len() != inst.premises.len() {
            return false;
        }
        let signs_ok = inst.premises.iter().zip(&self.premise_weights).all(|(p, w)| match p.relation {
            Relation::Eq => true,
            Relation::Ge => !w.is_negative(),
            Relation::Le => !w.is_positive(),
        });
        let rhs: Rational = inst
            .premises
            .iter()
            .zip(&self.premise_weights)
            .map(|(p, w)| w * &p.probability)
            .sum::<Rational>()
            + &self.normalization_weight;
        if !signs_ok || !rhs.is_positive() {
            return false;
        }
        (0..inst.assignment_count()).all(|v| {
            let mut total = self.normalization_weight.clone();
            for (p, w) in inst.premises.iter().zip(&self.premise_weights) {
                if inst.holds(&p.formula, v).unwrap_or(false) {
                    total += w;
                }
            }
            !total.is_positive()
        })
    }
}

/// Builds the LP over all `2^n` assignment probabilities.
///
/// Rows are the premises in order followed by the normalization row
/// `Σ p_v = 1`.
pub fn build_assignment_lp(inst: &ProbLogicInstance, sense: Sense) -> Result<LpProblem, ProbLogicError> {
    inst.validate()?;
    inst.check_size()?;
    let table = TruthTable::build(inst)?;
    let columns: Vec<u64> = (0..inst.assignment_count()).collect();
    restricted_lp(inst, &table, &columns, sense)
}

/// The assignment LP restricted to `columns`.
pub(crate) fn restricted_lp(
    inst: &ProbLogicInstance,
    table: &TruthTable,
    columns: &[u64],
    sense: Sense,
) -> Result<LpProblem, ProbLogicError> {
    let mut lp = LpProblem::new(sense);
    let names: Vec<String> = columns.iter().map(|&v| inst.column_name(v)).collect();
    for (k, premise) in inst.premises.iter().enumerate() {
        let terms = columns
            .iter()
            .zip(&names)
            .filter(|(v, _)| table.rows[k][**v as usize])
            .map(|(_, name)| (name.clone(), Rational::one()));
        lp.add_constraint(LinearConstraint::new(terms, premise.relation, premise.probability.clone())?);
    }
    let all = names.iter().map(|name| (name.clone(), Rational::one()));
    lp.add_constraint(LinearConstraint::eq(all, Rational::one())?);
    let query = table.query();
    lp.set_objective(
        columns
            .iter()
            .zip(&names)
            .filter(|(v, _)| query[**v as usize])
            .map(|(_, name)| (name.clone(), Rational::one())),
    )?;
    Ok(lp)
}

fn solve_side(inst: &ProbLogicInstance, sense: Sense) -> Result<Rational, ProbLogicError> {
    let lp = build_assignment_lp(inst, sense)?;
    let result = lp_solve(&lp)?;
    match result.status {
        LpStatus::Optimal => Ok(result.value.unwrap_or_else(Rational::zero)),
        LpStatus::Infeasible => {
            let farkas = result.farkas.expect("infeasible LP carries a certificate");
            Err(ProbLogicError::Inconsistent(InconsistencyCertificate::from_farkas(
                &farkas.rows,
                &inst.premises,
            )))
        }
        LpStatus::Unbounded => Err(LpError::UnboundedRelaxation.into()),
    }
}

/// Tightest probability interval for the query, by full enumeration.
pub fn query_bounds(inst: &ProbLogicInstance) -> Result<ProbabilityInterval, ProbLogicError> {
    let lo = solve_side(inst, Sense::Min)?;
    let hi = solve_side(inst, Sense::Max)?;
    Ok(ProbabilityInterval { lo, hi })
}

/// Probability that `f` holds under the distribution `primal` (as returned
/// by the assignment LP). Handy for checking solutions.
pub fn probability_of(inst: &ProbLogicInstance, f: &Formula, primal: &BTreeMap<String, Rational>) -> Result<Rational, ProbLogicError> {
    let mut total = Rational::zero();
    for v in 0..inst.assignment_count() {
        if let Some(p) = primal.get(&inst.column_name(v)) {
            if inst.holds(f, v)? {
                total += p;
            }
        }
    }
    Ok(total)
}

/// The three-atom example: `P(A) = 9/10`, `P(A → B) = 8/10`,
/// `P(B → C) = 4/10`, query `C`.
pub fn boole_example() -> ProbLogicInstance {
    use crate::rational::rat;
    let a = Formula::atom("A");
    let b = Formula::atom("B");
    let c = Formula::atom("C");
    ProbLogicInstance {
        atoms: vec!["A".into(), "B".into(), "C".into()],
        premises: vec![
            Premise::exactly(a.clone(), rat(9, 10)),
            Premise::exactly(Formula::implies(a, b.clone()), rat(8, 10)),
            Premise::exactly(Formula::implies(b, c.clone()), rat(4, 10)),
        ],
        query: c,
    }
}
