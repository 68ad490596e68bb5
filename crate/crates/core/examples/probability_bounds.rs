//! Tightest bounds on P(C) given P(A), P(A -> B) and P(B -> C), first with
//! the full assignment LP and then by column generation.

use logopt::lp::Sense;
use logopt::problogic::text::parse_instance;
use logopt::problogic::{colgen_solve, query_bounds, query_bounds_colgen};
use logopt::rational::to_decimal;

fn main() {
    let inst = parse_instance(include_str!("../instances/boole.pl")).expect("shipped instance parses");

    let full = query_bounds(&inst).expect("premises are consistent");
    println!("full LP:           P(C) in {full}");
    println!("                   = [{}, {}]", to_decimal(&full.lo, 4), to_decimal(&full.hi, 4));

    let cg = query_bounds_colgen(&inst).expect("premises are consistent");
    println!("column generation: P(C) in {cg}");
    for sense in [Sense::Min, Sense::Max] {
        let run = colgen_solve(&inst, sense).expect("consistent");
        let names: Vec<String> = run.columns.iter().map(|&k| inst.column_name(k)).collect();
        println!("  {sense:?}: {} master solves, columns {}", run.iterations, names.join(" "));
    }
}
