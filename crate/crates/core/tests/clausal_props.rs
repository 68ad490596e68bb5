mod common;

use std::collections::BTreeMap;

use common::{binary_points, clause_holds, int, row_holds, to_bools};
use logopt::clausal::cnf::{parse_cnf, to_cnf};
use logopt::clausal::{
    cg_round, clause_to_inequality, input_resolution_derive, is_consistent_partial, is_consistent_set,
    is_lp_consistent_partial, is_lp_consistent_set, resolution_closure, resolve, unit_propagate, violates, Clause,
    Constraint, Literal, PartialAssignment,
};
use logopt::lp::LinearConstraint;
use logopt::rational::{rat, Rational};
use proptest::prelude::*;

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("x{k}")).collect()
}

fn clause(n: usize) -> impl Strategy<Value = Clause> {
    prop::collection::vec((1..=n, any::<bool>()), 0..=n).prop_map(|lits| {
        let mut seen = BTreeMap::new();
        for (v, s) in lits {
            seen.entry(v).or_insert(s);
        }
        Clause::new(seen.into_iter().map(|(v, s)| Literal { var: format!("x{v}"), positive: s })).unwrap()
    })
}

fn clause_set(n: usize, max: usize) -> impl Strategy<Value = Vec<Clause>> {
    prop::collection::vec(clause(n), 1..=max)
}

/// Every non-tautological clause over `vars`, including the empty one.
fn all_clauses(vars: &[String]) -> Vec<Clause> {
    let mut out = Vec::new();
    for code in 0..3u32.pow(vars.len() as u32) {
        let lits = vars.iter().enumerate().filter_map(|(k, v)| match code / 3u32.pow(k as u32) % 3 {
            0 => None,
            1 => Some(Literal::neg(v)),
            _ => Some(Literal::pos(v)),
        });
        out.push(Clause::new(lits).unwrap());
    }
    out
}

fn implied(set: &[Clause], c: &Clause, vars: &[String]) -> bool {
    binary_points(vars).iter().map(to_bools).all(|p| !set.iter().all(|s| clause_holds(s, &p)) || clause_holds(c, &p))
}

fn row(n: usize) -> impl Strategy<Value = LinearConstraint> {
    (prop::collection::vec(-3i64..=3, n), -3i64..=4).prop_map(move |(coefs, rhs)| {
        LinearConstraint::ge(names(n).into_iter().zip(coefs.into_iter().map(int)), int(rhs)).unwrap()
    })
}

fn constraint_set(n: usize) -> impl Strategy<Value = Vec<Constraint>> {
    prop::collection::vec(
        prop_oneof![clause(n).prop_filter("nonempty", |c| !c.is_empty()).prop_map(Constraint::from), row(n).prop_map(Constraint::from)],
        1..=4,
    )
}

/// Every partial assignment over `vars`.
fn partials(vars: &[String]) -> Vec<PartialAssignment> {
    (0..3u32.pow(vars.len() as u32))
        .map(|code| {
            vars.iter()
                .enumerate()
                .filter_map(|(k, v)| match code / 3u32.pow(k as u32) % 3 {
                    0 => None,
                    d => Some((v.clone(), d == 2)),
                })
                .collect()
        })
        .collect()
}

fn satisfies_all(constraints: &[Constraint], point: &BTreeMap<String, Rational>) -> bool {
    constraints.iter().all(|c| match c {
        Constraint::Clause(cl) => clause_holds(cl, &to_bools(point)),
        Constraint::Linear(r) => row_holds(r, point),
    })
}

fn extends(point: &BTreeMap<String, Rational>, pa: &PartialAssignment) -> bool {
    pa.0.iter().all(|(v, &b)| point[v] == int(b as i64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn resolvents_are_implied(a in clause(8), b in clause(8)) {
        if let Some(r) = resolve(&a, &b) {
            let vars = names(8);
            prop_assert!(implied(&[a, b], &r, &vars));
        }
    }

    #[test]
    fn closure_captures_every_implicate(set in clause_set(4, 5)) {
        let vars = names(4);
        let closure = resolution_closure(&set, 64);
        prop_assert!(!closure.truncated);
        for c in all_clauses(&vars) {
            let by_closure = closure.implies(&c);
            prop_assert_eq!(by_closure, implied(&set, &c, &vars), "clause {}", c);
        }
        for c in &closure.clauses {
            prop_assert!(implied(&set, c, &vars));
        }
    }

    #[test]
    fn input_derivations_are_checked_and_in_closure(set in clause_set(4, 5)) {
        let vars = names(4);
        let closure = resolution_closure(&set, 64);
        for target in all_clauses(&vars) {
            let Some(d) = input_resolution_derive(&set, &target) else { continue };
            prop_assert!(d.result.subsumes(&target));
            prop_assert!(closure.implies(&d.result));
            for (k, step) in d.steps.iter().enumerate() {
                prop_assert!(set.contains(&step.right));
                if k > 0 {
                    prop_assert_eq!(&step.left, &d.steps[k - 1].resolvent);
                }
                prop_assert_eq!(resolve(&step.left, &step.right), Some(step.resolvent.clone()));
            }
        }
    }

    #[test]
    fn rounded_cuts_are_valid(rows in prop::collection::vec(row(6), 1..=4), weights in prop::collection::vec((0i64..=4, 1i64..=4), 4)) {
        let mult: Vec<Rational> = weights[..rows.len()].iter().map(|&(a, b)| rat(a, b)).collect();
        let cut = cg_round(&rows, &mult).unwrap();
        for p in binary_points(&names(6)) {
            if rows.iter().all(|r| row_holds(r, &p)) {
                prop_assert!(row_holds(&cut, &p), "cut {} fails", cut);
            }
        }
    }

    #[test]
    fn clause_and_inequality_agree(c in clause(6)) {
        let row = clause_to_inequality(&c);
        for p in binary_points(&names(6)) {
            prop_assert_eq!(clause_holds(&c, &to_bools(&p)), row_holds(&row, &p));
        }
    }

    #[test]
    fn unit_propagation_is_sound(set in clause_set(5, 6)) {
        let up = unit_propagate(&set);
        let models: Vec<_> = binary_points(&names(5)).iter().map(to_bools).filter(|p| set.iter().all(|c| clause_holds(c, p))).collect();
        if up.conflict {
            prop_assert!(models.is_empty());
        }
        for m in &models {
            prop_assert!(up.units.iter().all(|l| m[&l.var] == l.positive));
            prop_assert!(up.clauses.iter().all(|c| clause_holds(c, m)));
        }
    }

    #[test]
    fn cnf_text_round_trips(set in clause_set(5, 6)) {
        let file = parse_cnf(&to_cnf(&set)).unwrap();
        prop_assert_eq!(file.clauses, set);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn consistency_implication_chain(set in constraint_set(4)) {
        let vars = names(4);
        let points = binary_points(&vars);
        let mut every_clean_consistent = true;
        let mut every_lp_consistent_consistent = true;
        for pa in partials(&vars) {
            let brute = points.iter().any(|p| extends(p, &pa) && satisfies_all(&set, p));
            let consistent = is_consistent_partial(&set, &pa, &vars).unwrap();
            let lp = is_lp_consistent_partial(&set, &pa);
            let clean = !set.iter().any(|c| violates(&pa, c));
            prop_assert_eq!(consistent, brute, "pa {}", pa);
            prop_assert!(!consistent || lp, "consistent but not LP-consistent: {}", pa);
            prop_assert!(!lp || clean, "LP-consistent yet violating: {}", pa);
            every_clean_consistent &= !clean || consistent;
            every_lp_consistent_consistent &= !lp || consistent;
        }
        prop_assert_eq!(is_consistent_set(&set, &vars).unwrap().0, every_clean_consistent);
        prop_assert_eq!(is_lp_consistent_set(&set, &vars).unwrap().0, every_lp_consistent_consistent);
    }
}
