//! Best-first 0–1 branch-and-bound on top of [`lp_solve`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num::{One, Signed, Zero};

use super::{lp_solve, Bounds, LinearConstraint, LpError, LpProblem, LpStatus, Sense};
use crate::rational::{rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilpResult {
    pub status: MilpStatus,
    pub value: Option<Rational>,
    /// 0–1 values of the integral variables.
    pub assignment: BTreeMap<String, bool>,
    /// Values of every variable at the incumbent.
    pub values: BTreeMap<String, Rational>,
    /// LP relaxations solved.
    pub node_count: usize,
    /// Constraints added by the lazy callback, in the order received.
    pub lazy_constraints: Vec<LinearConstraint>,
}

struct Node {
    /// Lower bound in minimization orientation; `None` for the root.
    bound: Option<Rational>,
    seq: usize,
    fixings: BTreeMap<String, bool>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap is a max-heap: smaller bound, then older node, pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        let by_bound = match (&self.bound, &other.bound) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => b.cmp(a),
        };
        by_bound.then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Exact optimum of `problem` with the variables in `integral` restricted
/// to {0, 1}.
///
/// Branches on the most fractional variable (ties to the smallest name) and
/// explores nodes best-bound first.
pub fn milp_solve(problem: &LpProblem, integral: &BTreeSet<String>) -> Result<MilpResult, LpError> {
    milp_solve_lazy(problem, integral, |_| Vec::new())
}

/// [`milp_solve`] with a lazy-constraint callback.
///
/// Whenever a node's relaxation is integral the callback sees its values and
/// may return constraints that the point violates. Those are added to a
/// global pool (they must be valid for every feasible point) and the node is
/// solved again; otherwise the point becomes an incumbent.
pub fn milp_solve_lazy<F>(
    problem: &LpProblem,
    integral: &BTreeSet<String>,
    mut lazy: F,
) -> Result<MilpResult, LpError>
where
    F: FnMut(&BTreeMap<String, Rational>) -> Vec<LinearConstraint>,
{
    problem.validate()?;
    let known = problem.variables();
    if let Some(v) = integral.iter().find(|v| !known.contains(*v)) {
        return Err(LpError::UnknownIntegralVariable(v.clone()));
    }

    let mut base = problem.clone();
    for v in integral {
        let b = base.bounds_of(v);
        let lower = b.lower.map_or_else(Rational::zero, |l| l.max(Rational::zero()));
        let upper = b.upper.map_or_else(Rational::one, |u| u.min(Rational::one()));
        base.set_bounds(v.clone(), Bounds::new(Some(lower), Some(upper)));
    }
    let orient = |value: &Rational| -> Rational {
        if problem.sense == Sense::Max {
            -value
        } else {
            value.clone()
        }
    };

    let mut pool: Vec<LinearConstraint> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    heap.push(Node {
        bound: None,
        seq,
        fixings: BTreeMap::new(),
    });
    let mut incumbent: Option<(Rational, BTreeMap<String, Rational>)> = None;
    let mut node_count = 0usize;
    let half = rat(1, 2);

    while let Some(node) = heap.pop() {
        if let (Some((best, _)), Some(bound)) = (&incumbent, &node.bound) {
            if bound >= best {
                break;
            }
        }
        let mut lp = base.clone();
        lp.constraints.extend(pool.iter().cloned());
        for (v, &one) in &node.fixings {
            let value = if one { Rational::one() } else { Rational::zero() };
            lp.set_bounds(v.clone(), Bounds::fixed(value));
        }
        node_count += 1;
        let relaxed = lp_solve(&lp)?;
        match relaxed.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => return Err(LpError::UnboundedRelaxation),
            LpStatus::Optimal => {}
        }
        let value = orient(relaxed.value.as_ref().expect("optimal value"));
        if incumbent.as_ref().is_some_and(|(best, _)| value >= *best) {
            continue;
        }

        let mut branch: Option<(&String, Rational)> = None;
        for v in integral {
            let x = &relaxed.primal[v];
            if x.is_integer() {
                continue;
            }
            let distance = (x - &half).abs();
            if branch.as_ref().is_none_or(|(_, d)| distance < *d) {
                branch = Some((v, distance));
            }
        }

        match branch {
            None => {
                let cuts: Vec<LinearConstraint> = lazy(&relaxed.primal)
                    .into_iter()
                    .filter(|c| c.is_satisfied_by(&relaxed.primal) == Some(false))
                    .collect();
                if cuts.is_empty() {
                    incumbent = Some((value, relaxed.primal));
                } else {
                    pool.extend(cuts);
                    seq += 1;
                    heap.push(Node {
                        bound: Some(value),
                        seq,
                        fixings: node.fixings,
                    });
                }
            }
            Some((var, _)) => {
                for side in [false, true] {
                    let mut fixings = node.fixings.clone();
                    fixings.insert(var.clone(), side);
                    seq += 1;
                    heap.push(Node {
                        bound: Some(value.clone()),
                        seq,
                        fixings,
                    });
                }
            }
        }
    }

    Ok(match incumbent {
        Some((_, values)) => {
            let assignment = integral
                .iter()
                .map(|v| (v.clone(), values[v].is_one()))
                .collect();
            MilpResult {
                status: MilpStatus::Optimal,
                value: Some(problem.objective_at(&values)),
                assignment,
                values,
                node_count,
                lazy_constraints: pool,
            }
        }
        None => MilpResult {
            status: MilpStatus::Infeasible,
            value: None,
            assignment: BTreeMap::new(),
            values: BTreeMap::new(),
            node_count,
            lazy_constraints: pool,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Relation;
    use crate::rational::int;

    fn binaries(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rounding_is_forced() {
        let mut lp = LpProblem::minimize();
        lp.set_objective([("x1", int(1))]).unwrap();
        lp.add_constraint(LinearConstraint::ge([("x1", int(1))], rat(1, 2)).unwrap());
        let r = milp_solve(&lp, &binaries(&["x1"])).unwrap();
        assert_eq!(r.value, Some(int(1)));
        assert!(r.assignment["x1"]);
    }

    #[test]
    fn small_knapsack() {
        let mut lp = LpProblem::maximize();
        lp.set_objective([("x1", int(3)), ("x2", int(2))]).unwrap();
        lp.add_constraint(
            LinearConstraint::new([("x1", int(2)), ("x2", int(2))], Relation::Le, int(3)).unwrap(),
        );
        let r = milp_solve(&lp, &binaries(&["x1", "x2"])).unwrap();
        assert_eq!(r.value, Some(int(3)));
        assert!(r.assignment["x1"]);
        assert!(!r.assignment["x2"]);
    }

    #[test]
    fn infeasible_over_binaries() {
        let mut lp = LpProblem::minimize();
        lp.add_constraint(LinearConstraint::ge([("x1", int(1)), ("x2", int(1))], int(3)).unwrap());
        let r = milp_solve(&lp, &binaries(&["x1", "x2"])).unwrap();
        assert_eq!(r.status, MilpStatus::Infeasible);
    }

    #[test]
    fn unknown_integral_variable() {
        let mut lp = LpProblem::minimize();
        lp.add_constraint(LinearConstraint::ge([("x", int(1))], int(0)).unwrap());
        assert_eq!(
            milp_solve(&lp, &binaries(&["y"])),
            Err(LpError::UnknownIntegralVariable("y".into()))
        );
    }

    #[test]
    fn unbounded_relaxation_is_an_error() {
        let mut lp = LpProblem::maximize();
        lp.set_objective([("z", int(1))]).unwrap();
        lp.add_constraint(LinearConstraint::ge([("z", int(1)), ("b", int(1))], int(0)).unwrap());
        assert_eq!(
            milp_solve(&lp, &binaries(&["b"])),
            Err(LpError::UnboundedRelaxation)
        );
    }

    #[test]
    fn lazy_constraints_cut_off_incumbents() {
        // maximize x1 + x2 but the callback forbids x1 = x2 = 1.
        let mut lp = LpProblem::maximize();
        lp.set_objective([("x1", int(1)), ("x2", int(1))]).unwrap();
        lp.add_constraint(LinearConstraint::le([("x1", int(1))], int(1)).unwrap());
        lp.add_constraint(LinearConstraint::le([("x2", int(1))], int(1)).unwrap());
        let r = milp_solve_lazy(&lp, &binaries(&["x1", "x2"]), |values| {
            if (&values["x1"] + &values["x2"] - int(2)).abs() < rat(1, 2) {
                vec![LinearConstraint::le([("x1", int(1)), ("x2", int(1))], int(1)).unwrap()]
            } else {
                Vec::new()
            }
        })
        .unwrap();
        assert_eq!(r.value, Some(int(1)));
        assert_eq!(r.lazy_constraints.len(), 1);
    }
}
