//! Resolution, input resolution, unit propagation and the matching
//! inequality view of the same clauses.

use logopt::clausal::{
    cg_round, clause_to_inequality, elementary_closure_clause_check, input_resolution_derive, resolution_closure,
    resolve, unit_propagate, Clause,
};
use logopt::rational::rat;

fn clause(text: &str) -> Clause {
    Clause::parse(text).expect("well-formed clause")
}

fn main() {
    let set = [clause("x1 x2 x3"), clause("x1 -x3")];
    let r = resolve(&set[0], &set[1]).expect("clash on x3");
    println!("resolve: {}  with  {}  ->  {r}", set[0], set[1]);

    let closure = resolution_closure(&set, 16);
    println!("prime implicates after {} rounds:", closure.rounds);
    for c in &closure.clauses {
        println!("  {c}");
    }

    let target = clause("x1 x2");
    if let Some(d) = input_resolution_derive(&set, &target) {
        println!("input-resolution derivation of {target}:");
        for step in &d.steps {
            println!("  {} + {} -> {}", step.left, step.right, step.resolvent);
        }
    }
    println!("rank-1 cut check: {}", elementary_closure_clause_check(&set, &target));

    // The same inference as rounding: halve each row, add, round up.
    let mut rows: Vec<_> = set.iter().map(clause_to_inequality).collect();
    rows.push(logopt::lp::LinearConstraint::ge([("x2", rat(1, 1))], rat(0, 1)).expect("valid row"));
    for row in &rows {
        println!("  row {row}");
    }
    let cut = cg_round(&rows, &[rat(1, 2), rat(1, 2), rat(1, 2)]).expect("nonnegative weights");
    println!("rounded cut: {cut}");

    let up = unit_propagate(&[clause("a"), clause("-a b"), clause("-b c d"), clause("-c"), clause("d e f"), clause("-e -d g")]);
    let units: Vec<String> = up.units.iter().map(ToString::to_string).collect();
    println!("unit propagation fixes {}; simplified set:", units.join(", "));
    for c in &up.clauses {
        println!("  {c}");
    }
}
