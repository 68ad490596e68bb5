//! Two-phase dense tableau simplex with Bland's rule.
//!
//! Original variables are mapped onto nonnegative columns: a variable with a
//! finite lower bound is shifted (`x = l + x'`), one with only an upper bound
//! is mirrored (`x = u - x'`), and a free variable is split into two columns.
//! A variable with both bounds finite gets an extra internal row
//! `x' ≤ u - l`. Every internal row receives its own artificial column so that
//! dual values and Farkas multipliers can be read off the final tableau.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use super::{
    FarkasCertificate, LpError, LpProblem, LpResult, LpStatus, Relation, Sense,
};
use crate::rational::Rational;

#[derive(Debug, Clone)]
enum Column {
    Shift { col: usize, lower: Rational },
    Mirror { col: usize, upper: Rational },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the current phase objective.
    reduced: Vec<Rational>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = Rational::one() / &self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[row] *= &inv;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for (j, p) in pivot_row.iter().enumerate() {
                if !p.is_zero() {
                    let delta = &factor * p;
                    self.rows[i][j] -= delta;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.reduced[col].is_zero() {
            let factor = self.reduced[col].clone();
            for (j, p) in pivot_row.iter().enumerate() {
                if !p.is_zero() {
                    let delta = &factor * p;
                    self.reduced[j] -= delta;
                }
            }
        }
        self.basis[row] = col;
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let mut reduced = costs.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[i].iter().enumerate() {
                if !a.is_zero() {
                    reduced[j] -= cb * a;
                }
            }
        }
        self.reduced = reduced;
    }

    /// Runs Bland's rule over columns `< allowed`. Returns `false` when the
    /// objective is unbounded below.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| self.reduced[j].is_negative());
            let Some(col) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((r, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*r]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

/// Solves `problem` exactly.
///
/// Optimal results carry a primal point, shadow prices and reduced costs;
/// infeasible results carry a [`FarkasCertificate`].
pub fn lp_solve(problem: &LpProblem) -> Result<LpResult, LpError> {
    problem.validate()?;
    let vars: Vec<String> = problem.variables().into_iter().collect();

    // Column layout for the original variables.
    let mut columns: Vec<Column> = Vec::with_capacity(vars.len());
    let mut n_struct = 0usize;
    let mut upper_rows: Vec<(usize, Rational)> = Vec::new(); // (var index, u - l)
    for (k, v) in vars.iter().enumerate() {
        let b = problem.bounds_of(v);
        match (b.lower, b.upper) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    upper_rows.push((k, u - &l));
                }
                columns.push(Column::Shift { col: n_struct, lower: l });
                n_struct += 1;
            }
            (None, Some(u)) => {
                columns.push(Column::Mirror { col: n_struct, upper: u });
                n_struct += 1;
            }
            (None, None) => {
                columns.push(Column::Split { pos: n_struct, neg: n_struct + 1 });
                n_struct += 2;
            }
        }
    }
    let var_index: BTreeMap<&str, usize> = vars
        .iter()
        .enumerate()
        .map(|(k, v)| (v.as_str(), k))
        .collect();

    // Internal rows over structural columns.
    let n_orig = problem.constraints.len();
    let n_rows = n_orig + upper_rows.len();
    let mut dense: Vec<Vec<Rational>> = Vec::with_capacity(n_rows);
    let mut rhs: Vec<Rational> = Vec::with_capacity(n_rows);
    let mut relations: Vec<Relation> = Vec::with_capacity(n_rows);
    for c in &problem.constraints {
        let mut row = vec![Rational::zero(); n_struct];
        let mut b = c.rhs().clone();
        for (v, a) in c.coefficients() {
            match &columns[var_index[v.as_str()]] {
                Column::Shift { col, lower } => {
                    row[*col] += a;
                    b -= a * lower;
                }
                Column::Mirror { col, upper } => {
                    row[*col] -= a;
                    b -= a * upper;
                }
                Column::Split { pos, neg } => {
                    row[*pos] += a;
                    row[*neg] -= a;
                }
            }
        }
        dense.push(row);
        rhs.push(b);
        relations.push(c.relation());
    }
    for (k, span) in &upper_rows {
        let mut row = vec![Rational::zero(); n_struct];
        if let Column::Shift { col, .. } = &columns[*k] {
            row[*col] = Rational::one();
        }
        dense.push(row);
        rhs.push(span.clone());
        relations.push(Relation::Le);
    }

    // Slack columns follow the structural ones, artificials come last.
    let n_slack = relations.iter().filter(|r| **r != Relation::Eq).count();
    let art0 = n_struct + n_slack;
    let width = art0 + n_rows;
    let mut flips: Vec<bool> = Vec::with_capacity(n_rows);
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n_rows);
    let mut slack = n_struct;
    for i in 0..n_rows {
        let mut row = vec![Rational::zero(); width];
        row[..n_struct].clone_from_slice(&dense[i]);
        match relations[i] {
            Relation::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
            }
            Relation::Le => {
                row[slack] = Rational::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        let flip = rhs[i].is_negative();
        if flip {
            for v in row.iter_mut() {
                *v = -&*v;
            }
            rhs[i] = -&rhs[i];
        }
        row[art0 + i] = Rational::one();
        flips.push(flip);
        rows.push(row);
    }

    let mut tableau = Tableau {
        rows,
        rhs,
        basis: (art0..width).collect(),
        reduced: Vec::new(),
        width,
    };

    // Phase 1: minimize the sum of artificials.
    let mut phase1 = vec![Rational::zero(); width];
    for c in phase1.iter_mut().skip(art0) {
        *c = Rational::one();
    }
    tableau.set_costs(&phase1);
    tableau.optimize(width);
    let infeasibility: Rational = tableau
        .basis
        .iter()
        .zip(&tableau.rhs)
        .filter(|(b, _)| **b >= art0)
        .map(|(_, r)| r.clone())
        .sum();

    // Multiplier of internal row i in its original orientation, read from the
    // reduced cost of its artificial column.
    let row_multiplier = |t: &Tableau, i: usize, art_cost: &Rational| -> Rational {
        let y = art_cost - &t.reduced[art0 + i];
        if flips[i] {
            -y
        } else {
            y
        }
    };

    if infeasibility.is_positive() {
        let one = Rational::one();
        let ys: Vec<Rational> = (0..n_rows).map(|i| row_multiplier(&tableau, i, &one)).collect();
        let farkas = build_certificate(problem, &vars, &columns, &upper_rows, &ys);
        debug_assert!(farkas.verify(problem), "invalid Farkas certificate");
        return Ok(LpResult {
            status: LpStatus::Infeasible,
            value: None,
            primal: BTreeMap::new(),
            duals: Vec::new(),
            reduced_costs: BTreeMap::new(),
            farkas: Some(farkas),
        });
    }

    // Drive zero-level artificials out of the basis where possible.
    for i in 0..n_rows {
        if tableau.basis[i] < art0 {
            continue;
        }
        if let Some(col) = (0..art0).find(|&j| !tableau.rows[i][j].is_zero()) {
            tableau.pivot(i, col);
        }
    }

    // Phase 2 on the internal minimization objective.
    let flip_sense = problem.sense == Sense::Max;
    let mut costs = vec![Rational::zero(); tableau.width];
    for (k, v) in vars.iter().enumerate() {
        let Some(c) = problem.objective.get(v) else { continue };
        let c = if flip_sense { -c } else { c.clone() };
        match &columns[k] {
            Column::Shift { col, .. } => costs[*col] = c,
            Column::Mirror { col, .. } => costs[*col] = -c,
            Column::Split { pos, neg } => {
                costs[*neg] = -c.clone();
                costs[*pos] = c;
            }
        }
    }
    tableau.set_costs(&costs);
    if !tableau.optimize(art0) {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            value: None,
            primal: BTreeMap::new(),
            duals: Vec::new(),
            reduced_costs: BTreeMap::new(),
            farkas: None,
        });
    }

    let mut internal = vec![Rational::zero(); n_struct];
    for (i, &b) in tableau.basis.iter().enumerate() {
        if b < n_struct {
            internal[b] = tableau.rhs[i].clone();
        }
    }
    let mut primal = BTreeMap::new();
    for (k, v) in vars.iter().enumerate() {
        let x = match &columns[k] {
            Column::Shift { col, lower } => lower + &internal[*col],
            Column::Mirror { col, upper } => upper - &internal[*col],
            Column::Split { pos, neg } => &internal[*pos] - &internal[*neg],
        };
        primal.insert(v.clone(), x);
    }

    let zero = Rational::zero();
    let duals: Vec<Rational> = (0..n_orig)
        .map(|i| {
            let y = row_multiplier(&tableau, i, &zero);
            if flip_sense {
                -y
            } else {
                y
            }
        })
        .collect();
    let mut reduced_costs = BTreeMap::new();
    for v in &vars {
        let mut rc = problem.objective.get(v).cloned().unwrap_or_else(Rational::zero);
        for (row, y) in problem.constraints.iter().zip(&duals) {
            if let Some(a) = row.coefficients().get(v) {
                rc -= y * a;
            }
        }
        reduced_costs.insert(v.clone(), rc);
    }
    let value = problem.objective_at(&primal);
    Ok(LpResult {
        status: LpStatus::Optimal,
        value: Some(value),
        primal,
        duals,
        reduced_costs,
        farkas: None,
    })
}

fn build_certificate(
    problem: &LpProblem,
    vars: &[String],
    columns: &[Column],
    upper_rows: &[(usize, Rational)],
    ys: &[Rational],
) -> FarkasCertificate {
    let n_orig = problem.constraints.len();
    // ≥-normalized multipliers.
    let rows: Vec<Rational> = problem
        .constraints
        .iter()
        .zip(ys)
        .map(|(c, y)| if c.relation() == Relation::Le { -y } else { y.clone() })
        .collect();
    let mut upper = BTreeMap::new();
    for (offset, (k, _)) in upper_rows.iter().enumerate() {
        let m = -&ys[n_orig + offset];
        if !m.is_zero() {
            upper.insert(vars[*k].clone(), m);
        }
    }
    // Whatever variable coefficient remains is absorbed by the bound rows.
    let mut residual: BTreeMap<String, Rational> = BTreeMap::new();
    for (c, m) in problem.constraints.iter().zip(&rows) {
        let sign = if c.relation() == Relation::Le { -m.clone() } else { m.clone() };
        for (v, a) in c.coefficients() {
            *residual.entry(v.clone()).or_insert_with(Rational::zero) += &sign * a;
        }
    }
    for (v, m) in &upper {
        *residual.entry(v.clone()).or_insert_with(Rational::zero) -= m;
    }
    let mut lower = BTreeMap::new();
    for (k, v) in vars.iter().enumerate() {
        let r = residual.get(v).cloned().unwrap_or_else(Rational::zero);
        if r.is_zero() {
            continue;
        }
        match &columns[k] {
            Column::Shift { .. } => {
                lower.insert(v.clone(), -r);
            }
            Column::Mirror { .. } => {
                *upper.entry(v.clone()).or_insert_with(Rational::zero) += r;
            }
            Column::Split { .. } => {}
        }
    }
    FarkasCertificate { rows, lower, upper }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{Bounds, LinearConstraint};
    use crate::rational::{int, rat};

    fn lc(terms: &[(&str, i64)], rel: Relation, rhs: i64) -> LinearConstraint {
        LinearConstraint::new(terms.iter().map(|(v, a)| (*v, int(*a))), rel, int(rhs)).unwrap()
    }

    #[test]
    fn single_binding_constraint() {
        let mut lp = LpProblem::minimize();
        lp.set_objective([("x", int(1))]).unwrap();
        lp.add_constraint(lc(&[("x", 1)], Relation::Ge, 3));
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.value, Some(int(3)));
        assert_eq!(r.duals, vec![int(1)]);
        assert_eq!(r.dual_value(&lp), Some(int(3)));
    }

    #[test]
    fn two_dimensional_vertex() {
        let mut lp = LpProblem::minimize();
        lp.set_objective([("x1", int(1)), ("x2", int(1))]).unwrap();
        lp.add_constraint(lc(&[("x1", 1), ("x2", 2)], Relation::Ge, 2));
        lp.add_constraint(lc(&[("x1", 2), ("x2", 1)], Relation::Ge, 2));
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.value, Some(rat(4, 3)));
        assert_eq!(r.primal["x1"], rat(2, 3));
        assert_eq!(r.primal["x2"], rat(2, 3));
        assert_eq!(r.dual_value(&lp), Some(rat(4, 3)));
    }

    #[test]
    fn maximization_with_upper_bounds() {
        let mut lp = LpProblem::maximize();
        lp.set_objective([("x", int(3)), ("y", int(2))]).unwrap();
        lp.add_constraint(lc(&[("x", 2), ("y", 2)], Relation::Le, 3));
        lp.set_bounds("x", Bounds::binary());
        lp.set_bounds("y", Bounds::binary());
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.value, Some(int(4)));
        assert_eq!(r.primal["y"], rat(1, 2));
        assert_eq!(r.dual_value(&lp), Some(int(4)));
    }

    #[test]
    fn free_and_mirrored_variables() {
        // min x - y with x free, y <= 4, x >= y - 10 ... x - y >= -10
        let mut lp = LpProblem::minimize();
        lp.set_objective([("x", int(1)), ("y", int(-1))]).unwrap();
        lp.add_constraint(lc(&[("x", 1), ("y", -1)], Relation::Ge, -10));
        lp.set_bounds("x", Bounds::free());
        lp.set_bounds("y", Bounds::new(None, Some(int(4))));
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.value, Some(int(-10)));
        assert_eq!(r.dual_value(&lp), Some(int(-10)));
    }

    #[test]
    fn infeasible_with_certificate() {
        let mut lp = LpProblem::minimize();
        lp.set_objective([("x", int(1))]).unwrap();
        lp.add_constraint(lc(&[("x", 1), ("y", 1)], Relation::Ge, 3));
        lp.set_bounds("x", Bounds::binary());
        lp.set_bounds("y", Bounds::binary());
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
        assert!(r.farkas.unwrap().verify(&lp));
    }

    #[test]
    fn crossed_bounds_are_infeasible() {
        let mut lp = LpProblem::minimize();
        lp.set_bounds("x", Bounds::new(Some(int(2)), Some(int(1))));
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
        assert!(r.farkas.unwrap().verify(&lp));
    }

    #[test]
    fn equality_infeasibility() {
        let mut lp = LpProblem::minimize();
        lp.add_constraint(lc(&[("a", 1), ("b", 1)], Relation::Eq, 1));
        lp.add_constraint(lc(&[("a", 1)], Relation::Eq, 2));
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
        let cert = r.farkas.unwrap();
        assert!(cert.verify(&lp));
    }

    #[test]
    fn unbounded() {
        let mut lp = LpProblem::maximize();
        lp.set_objective([("x", int(1))]).unwrap();
        lp.add_constraint(lc(&[("x", 1), ("y", -1)], Relation::Le, 1));
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
    }

    #[test]
    fn empty_problem_is_optimal_at_zero() {
        let lp = LpProblem::minimize();
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.value, Some(int(0)));
    }

    #[test]
    fn degenerate_redundant_equalities() {
        let mut lp = LpProblem::minimize();
        lp.set_objective([("a", int(1)), ("b", int(2))]).unwrap();
        lp.add_constraint(lc(&[("a", 1), ("b", 1)], Relation::Eq, 1));
        lp.add_constraint(lc(&[("a", 2), ("b", 2)], Relation::Eq, 2));
        let r = lp_solve(&lp).unwrap();
        assert_eq!(r.value, Some(int(1)));
        assert_eq!(r.dual_value(&lp), Some(int(1)));
        assert!(lp.is_feasible(&r.primal));
    }
}
