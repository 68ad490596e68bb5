use num::{One, Signed, Zero};

use super::{input_resolution_derive, ClausalError, Clause};
use crate::lp::{LinearConstraint, Relation};
use crate::rational::Rational;

/// `x_j` for a positive literal and `1 - x_j` for a negative one, summed
/// into a `≥ 1` row. A clause with k negative literals gets rhs `1 - k`.
pub fn clause_to_inequality(c: &Clause) -> LinearConstraint {
    let mut rhs = Rational::one();
    let terms: Vec<(String, Rational)> = c
        .literals()
        .map(|lit| {
            if lit.positive {
                (lit.var, Rational::one())
            } else {
                rhs -= Rational::one();
                (lit.var, -Rational::one())
            }
        })
        .collect();
    LinearConstraint::ge(terms, rhs).expect("clause variables are nonempty")
}

/// Rank-1 Chvátal–Gomory cut: the nonnegative combination of `rows` with
/// every coefficient and the right-hand side rounded up.
pub fn cg_round(rows: &[LinearConstraint], multipliers: &[Rational]) -> Result<LinearConstraint, ClausalError> {
    if rows.len() != multipliers.len() {
        return Err(ClausalError::MultiplierCount {
            rows: rows.len(),
            multipliers: multipliers.len(),
        });
    }
    let mut terms: std::collections::BTreeMap<String, Rational> = Default::default();
    let mut rhs = Rational::zero();
    for (k, (row, u)) in rows.iter().zip(multipliers).enumerate() {
        if u.is_negative() {
            return Err(ClausalError::NegativeMultiplier(k));
        }
        if row.relation() != Relation::Ge {
            return Err(ClausalError::NotGeRow(k));
        }
        for (var, a) in row.coefficients() {
            *terms.entry(var.clone()).or_insert_with(Rational::zero) += a * u;
        }
        rhs += row.rhs() * u;
    }
    Ok(LinearConstraint::ge(terms.into_iter().map(|(v, a)| (v, a.ceil())), rhs.ceil())?)
}

/// Whether the inequality form of `c` is a rank-1 cut for `clauses`,
/// decided by searching for an input-resolution derivation.
pub fn elementary_closure_clause_check(clauses: &[Clause], c: &Clause) -> bool {
    input_resolution_derive(clauses, c).is_some()
}
