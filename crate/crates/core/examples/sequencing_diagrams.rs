//! Decision diagrams for single-machine sequencing: exact, relaxed and
//! restricted compilation, branch and bound, and near-optimal enumeration.

use logopt::dd::sequencing::{job_sequencing_model, SeqState, SequencingInstance};
use logopt::dd::{
    compile_exact, compile_relaxed, compile_relaxed_forced, compile_restricted, enumerate_near_optimal, reduce,
    shortest_path, solve_bnb, DEFAULT_EXACT_CAP,
};
use logopt::rational::rat;

fn state(jobs: &[usize], finish: i64) -> SeqState {
    SeqState { assigned: jobs.iter().copied().collect(), finish }
}

fn main() {
    let inst = SequencingInstance::three_job_example();
    let model = job_sequencing_model(&inst);

    let exact = compile_exact(&model, DEFAULT_EXACT_CAP).expect("tiny");
    let (best, seq) = shortest_path(&exact).expect("feasible");
    println!("exact: {} nodes, {} paths, optimum {best} via {seq:?}", exact.node_count(), exact.path_count());
    println!("reduced: {} nodes", reduce(&exact).node_count());

    let merged = [state(&[1, 2], 6), state(&[2, 3], 5)];
    let (_, bound) = compile_relaxed_forced(&model, 2, &merged).expect("states exist");
    println!("merging ({{1,2}},6) with ({{2,3}},5): bound {bound}");

    for w in 1..=3 {
        let (_, lower) = compile_relaxed(&model, w).expect("positive width");
        let (_, upper) = compile_restricted(&model, w).expect("positive width");
        let upper = upper.map_or("-".to_string(), |(v, _)| v.to_string());
        println!("width {w}: relaxed {lower}, restricted {upper}");
    }

    let bnb = solve_bnb(&model, 2).expect("positive width");
    println!("branch and bound: {} nodes, optimum {}", bnb.log.len(), bnb.value.expect("feasible"));

    for (seq, cost) in enumerate_near_optimal(&exact, Some(&rat(1, 1))).expect("exact diagram") {
        println!("  within 1: {seq:?} costs {cost}");
    }
}
