//! Exact simplex: an optimum with its duals, an infeasible system with its
//! Farkas proof, and a small 0-1 program.

use std::collections::BTreeSet;

use logopt::lp::text::parse_lp;
use logopt::lp::{lp_solve, milp_solve};

fn main() {
    let diet = parse_lp(include_str!("../instances/diet.lp")).expect("shipped instance parses");
    let res = lp_solve(&diet.problem).expect("well-formed");
    let point: Vec<String> = res.primal.iter().map(|(v, x)| format!("{v}={x}")).collect();
    println!("diet: value {} at {}", res.value.as_ref().expect("optimal"), point.join(" "));
    let duals: Vec<String> = res.duals.iter().map(ToString::to_string).collect();
    println!("      duals [{}], dual objective {}", duals.join(", "), res.dual_value(&diet.problem).expect("dual feasible"));

    let clash = parse_lp("x + y >= 3\nx + y <= 2\n").expect("valid");
    let res = lp_solve(&clash.problem).expect("well-formed");
    let cert = res.farkas.expect("infeasible systems carry a certificate");
    let (coefs, rhs) = cert.combination(&clash.problem);
    println!("clash: {:?}, row weights {:?}", res.status, cert.rows.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("       combination has {} nonzero coefficients and rhs {rhs}", coefs.len());

    let knap = parse_lp(include_str!("../instances/knapsack.lp")).expect("shipped instance parses");
    let res = milp_solve(&knap.problem, &knap.integral).expect("well-formed");
    let chosen: BTreeSet<&str> = res.assignment.iter().filter(|(_, &b)| b).map(|(v, _)| v.as_str()).collect();
    println!("knapsack: value {} choosing {chosen:?} in {} nodes", res.value.expect("feasible"), res.node_count);
}
