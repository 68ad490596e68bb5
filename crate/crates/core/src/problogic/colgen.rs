//! Column generation over truth-assignment columns.
//!
//! The restricted master holds a subset of assignments. When it is
//! infeasible its Farkas multipliers are priced: any assignment whose column
//! breaks the certificate is added, and if none exists the certificate is
//! valid for the full LP. When it is optimal the duals are priced and the
//! column with the most improving reduced cost enters. Pricing enumerates all
//! assignments.

use std::collections::BTreeSet;

use num::{Signed, Zero};

use super::{
    restricted_lp, InconsistencyCertificate, ProbLogicError, ProbLogicInstance,
    ProbabilityInterval, TruthTable, MAX_ATOMS,
};
use crate::lp::{lp_solve, LpError, LpStatus, Sense};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColgenOutcome {
    pub value: Rational,
    /// Assignment indices held by the final restricted master.
    pub columns: Vec<u64>,
    /// Restricted master solves.
    pub iterations: usize,
}

fn initial_columns(inst: &ProbLogicInstance, table: &TruthTable) -> BTreeSet<u64> {
    let count = inst.assignment_count();
    let mut columns = BTreeSet::from([0, count - 1]);
    for row in &table.rows[..inst.premises.len()] {
        if let Some(v) = row.iter().position(|&sat| sat) {
            columns.insert(v as u64);
        }
    }
    columns
}

/// Optimizes the query probability in direction `sense` by column generation.
pub fn colgen_solve(inst: &ProbLogicInstance, sense: Sense) -> Result<ColgenOutcome, ProbLogicError> {
    inst.validate()?;
    if inst.atoms.len() > MAX_ATOMS {
        return Err(ProbLogicError::TooManyAtoms {
            count: inst.atoms.len(),
            limit: MAX_ATOMS,
        });
    }
    let table = TruthTable::build(inst)?;
    let n_premises = inst.premises.len();
    let count = inst.assignment_count();
    let mut columns = initial_columns(inst, &table);
    let mut iterations = 0;

    // Σ_i w_i a_iv over premise rows plus the normalization row.
    let weight_of = |weights: &[Rational], v: u64| -> Rational {
        let mut total = weights[n_premises].clone();
        for (k, w) in weights[..n_premises].iter().enumerate() {
            if table.rows[k][v as usize] {
                total += w;
            }
        }
        total
    };

    loop {
        iterations += 1;
        let current: Vec<u64> = columns.iter().copied().collect();
        let lp = restricted_lp(inst, &table, &current, sense)?;
        let result = lp_solve(&lp)?;
        let entering = match result.status {
            LpStatus::Unbounded => return Err(LpError::UnboundedRelaxation.into()),
            LpStatus::Infeasible => {
                let farkas = result.farkas.expect("infeasible LP carries a certificate");
                let cert = InconsistencyCertificate::from_farkas(&farkas.rows, &inst.premises);
                let mut weights = cert.premise_weights.clone();
                weights.push(cert.normalization_weight.clone());
                let mut best: Option<(u64, Rational)> = None;
                for v in (0..count).filter(|v| !columns.contains(v)) {
                    let w = weight_of(&weights, v);
                    if w.is_positive() && best.as_ref().is_none_or(|(_, b)| w > *b) {
                        best = Some((v, w));
                    }
                }
                match best {
                    Some((v, _)) => v,
                    None => return Err(ProbLogicError::Inconsistent(cert)),
                }
            }
            LpStatus::Optimal => {
                let query = table.query();
                let mut best: Option<(u64, Rational)> = None;
                for v in (0..count).filter(|v| !columns.contains(v)) {
                    let cost = if query[v as usize] { Rational::from_integer(1.into()) } else { Rational::zero() };
                    let reduced = cost - weight_of(&result.duals, v);
                    // Improvement measured in the minimization direction.
                    let gain = match sense {
                        Sense::Min => -reduced,
                        Sense::Max => reduced,
                    };
                    if gain.is_positive() && best.as_ref().is_none_or(|(_, b)| gain > *b) {
                        best = Some((v, gain));
                    }
                }
                match best {
                    Some((v, _)) => v,
                    None => {
                        return Ok(ColgenOutcome {
                            value: result.value.unwrap_or_else(Rational::zero),
                            columns: current,
                            iterations,
                        })
                    }
                }
            }
        };
        columns.insert(entering);
    }
}

/// Same interval as [`super::query_bounds`], computed by column generation.
pub fn query_bounds_colgen(inst: &ProbLogicInstance) -> Result<ProbabilityInterval, ProbLogicError> {
    let lo = colgen_solve(inst, Sense::Min)?.value;
    let hi = colgen_solve(inst, Sense::Max)?.value;
    Ok(ProbabilityInterval { lo, hi })
}
