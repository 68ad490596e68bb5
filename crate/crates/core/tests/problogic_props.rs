use logopt::problogic::{
    boole_example, query_bounds, query_bounds_colgen, Formula, Premise, ProbLogicError, ProbLogicInstance,
};
use logopt::lp::Relation;
use logopt::rational::{rat, Rational};
use proptest::prelude::*;

const ATOMS: [&str; 4] = ["A", "B", "C", "D"];

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = (0usize..4).prop_map(|k| Formula::atom(ATOMS[k]));
    leaf.prop_recursive(depth, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

/// Premises are made consistent by taking their probabilities from one
/// random distribution over the 16 assignments.
fn instance() -> impl Strategy<Value = (ProbLogicInstance, Premise)> {
    (
        prop::collection::vec(0u32..5, 16),
        prop::collection::vec((formula(2), 0u8..3), 1..4),
        formula(2),
        (formula(2), 0u8..3),
    )
        .prop_filter("some weight", |(w, ..)| w.iter().any(|&x| x > 0))
        .prop_map(|(weights, premises, query, extra)| {
            let total: u32 = weights.iter().sum();
            let atoms: Vec<String> = ATOMS.iter().map(|s| s.to_string()).collect();
            let prob = |f: &Formula| -> Rational {
                let mass: u32 = (0..16u32)
                    .filter(|bits| {
                        let lookup = |a: &str| {
                            let k = ATOMS.iter().position(|x| *x == a)?;
                            Some(bits >> (3 - k) & 1 == 1)
                        };
                        f.eval_with(&lookup).unwrap()
                    })
                    .map(|bits| weights[bits as usize])
                    .sum();
                rat(mass as i64, total as i64)
            };
            let make = |(f, rel): (Formula, u8)| {
                let p = prob(&f);
                Premise { formula: f, relation: [Relation::Eq, Relation::Ge, Relation::Le][rel as usize % 3], probability: p }
            };
            let inst = ProbLogicInstance { atoms, premises: premises.into_iter().map(make).collect(), query };
            (inst, make(extra))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn column_generation_matches_full_lp((inst, _) in instance()) {
        let full = query_bounds(&inst).unwrap();
        prop_assert!(full.lo >= rat(0, 1) && full.lo <= full.hi && full.hi <= rat(1, 1));
        prop_assert_eq!(query_bounds_colgen(&inst).unwrap(), full);
    }

    #[test]
    fn extra_premise_never_widens((inst, extra) in instance()) {
        let before = query_bounds(&inst).unwrap();
        let mut more = inst.clone();
        more.premises.push(extra);
        let after = query_bounds(&more).unwrap();
        prop_assert!(after.lo >= before.lo && after.hi <= before.hi);
    }

    #[test]
    fn valid_and_unsatisfiable_queries((mut inst, _) in instance()) {
        let a = Formula::atom("A");
        inst.query = Formula::or(a.clone(), Formula::not(a.clone()));
        let b = query_bounds(&inst).unwrap();
        prop_assert_eq!((b.lo, b.hi), (rat(1, 1), rat(1, 1)));
        inst.query = Formula::and(a.clone(), Formula::not(a));
        let b = query_bounds_colgen(&inst).unwrap();
        prop_assert_eq!((b.lo, b.hi), (rat(0, 1), rat(0, 1)));
    }
}

#[test]
fn contradictory_premises_yield_certificate() {
    let mut inst = boole_example();
    inst.premises.push(Premise::exactly(Formula::not(Formula::atom("A")), rat(1, 2)));
    for result in [query_bounds(&inst), query_bounds_colgen(&inst)] {
        match result {
            Err(ProbLogicError::Inconsistent(cert)) => assert!(cert.verify(&inst)),
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }
}
