//! Assign jobs to two cumulative facilities with Benders cuts, solving the
//! master repeatedly and then in a single branch-and-check search.

use logopt::lbbd::{parse_scheduling, solve_lbbd, LbbdMode};

fn main() {
    let inst = parse_scheduling(include_str!("../instances/small.sched")).expect("shipped instance parses");
    for mode in [LbbdMode::Iterative, LbbdMode::BranchAndCheck] {
        let res = solve_lbbd(&inst, mode).expect("every job fits somewhere");
        println!("{mode:?}");
        for t in &res.trace {
            println!("  {t}");
        }
        println!("  makespan {}", res.makespan.expect("feasible"));
        for s in &res.schedules {
            println!("  facility {} finishes at {}, starts {:?}", s.facility + 1, s.makespan, s.starts);
        }
        for cut in res.cuts.iter().take(4) {
            println!("  cut {cut}");
        }
    }
}
