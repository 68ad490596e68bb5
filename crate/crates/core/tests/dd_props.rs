mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{int, path_cost, permutations, random_sequencing, sequence_cost, sequencing_optimum};
use logopt::dd::sequencing::parse_sequencing;
use logopt::dd::{
    compile_exact, compile_relaxed, compile_restricted, enumerate_near_optimal, export_dot, job_sequencing_model,
    path_multiset, reduce, shortest_path, solve_bnb, Objective, SequencingInstance, DEFAULT_EXACT_CAP,
};
use logopt::rational::{parse_rational, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(max_n: usize) -> impl Strategy<Value = SequencingInstance> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(0i64..=6, n),
            prop::collection::vec(1i64..=5, n),
            prop::collection::vec(1i64..=14, n),
            any::<bool>(),
        )
            .prop_map(|(r, p, d, tardy)| {
                let objective = if tardy { Objective::Tardiness } else { Objective::Makespan };
                SequencingInstance::new(r, p, d, objective).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn exact_diagram_is_the_permutation_set(inst in instance(6)) {
        let d = compile_exact(&job_sequencing_model(&inst), DEFAULT_EXACT_CAP).unwrap();
        let paths = d.paths();
        let labels: BTreeSet<Vec<i64>> = paths.iter().map(|(l, _)| l.clone()).collect();
        let perms = permutations(inst.release.len());
        prop_assert_eq!(paths.len(), perms.len());
        prop_assert_eq!(labels, perms.iter().cloned().collect::<BTreeSet<_>>());
        for (l, cost) in &paths {
            prop_assert_eq!(cost, &int(sequence_cost(&inst, l)));
        }
        prop_assert_eq!(shortest_path(&d).unwrap().0, int(sequencing_optimum(&inst)));
    }

    #[test]
    fn relaxed_diagrams_underestimate_every_solution(inst in instance(6), w in 1usize..=4) {
        let (d, bound) = compile_relaxed(&job_sequencing_model(&inst), w).unwrap();
        prop_assert!(d.width() <= w);
        for perm in permutations(inst.release.len()) {
            let cost = path_cost(&d, &perm);
            prop_assert!(cost.is_some(), "{:?} missing", perm);
            prop_assert!(cost.unwrap() <= int(sequence_cost(&inst, &perm)));
        }
        prop_assert!(bound <= int(sequencing_optimum(&inst)));
    }

    #[test]
    fn restricted_paths_are_feasible_and_priced_exactly(inst in instance(6), w in 1usize..=4) {
        let (d, best) = compile_restricted(&job_sequencing_model(&inst), w).unwrap();
        prop_assert!(d.width() <= w);
        for (labels, cost) in d.paths() {
            let mut sorted = labels.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (1..=inst.release.len() as i64).collect::<Vec<_>>());
            prop_assert_eq!(cost, int(sequence_cost(&inst, &labels)));
        }
        let (value, _) = best.expect("a restricted diagram keeps a path");
        prop_assert!(value >= int(sequencing_optimum(&inst)));
    }

    #[test]
    fn reduction_keeps_paths(inst in instance(6)) {
        let d = compile_exact(&job_sequencing_model(&inst), DEFAULT_EXACT_CAP).unwrap();
        let r = reduce(&d);
        prop_assert!(r.node_count() <= d.node_count());
        prop_assert_eq!(path_multiset(&r), path_multiset(&d));
    }

    #[test]
    fn branch_and_bound_finds_the_optimum(inst in instance(6), w in 1usize..=4) {
        let res = solve_bnb(&job_sequencing_model(&inst), w).unwrap();
        let best = sequencing_optimum(&inst);
        prop_assert_eq!(res.value, Some(int(best)));
        prop_assert_eq!(sequence_cost(&inst, &res.solution), best);
    }

    #[test]
    fn near_optimal_listing_matches_enumeration(inst in instance(5), delta in 0i64..=3) {
        let d = compile_exact(&job_sequencing_model(&inst), DEFAULT_EXACT_CAP).unwrap();
        let got: BTreeSet<Vec<i64>> =
            enumerate_near_optimal(&d, Some(&int(delta))).unwrap().into_iter().map(|(l, _)| l).collect();
        let best = sequencing_optimum(&inst);
        let want: BTreeSet<Vec<i64>> =
            permutations(inst.release.len()).into_iter().filter(|p| sequence_cost(&inst, p) <= best + delta).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn dot_export_parses_back(inst in instance(4), w in prop::option::of(1usize..=3)) {
        let model = job_sequencing_model(&inst);
        let d = match w {
            Some(w) => compile_relaxed(&model, w).unwrap().0,
            None => compile_exact(&model, DEFAULT_EXACT_CAP).unwrap(),
        };
        prop_assert_eq!(dot_paths(&export_dot(&d)), path_multiset(&d));
    }

    #[test]
    fn instance_text_round_trips(inst in instance(6)) {
        prop_assert_eq!(parse_sequencing(&inst.to_text()).unwrap(), inst);
    }
}

/// Rebuilds the (labels, cost) path multiset from DOT text alone.
fn dot_paths(dot: &str) -> BTreeMap<(Vec<i64>, Rational), usize> {
    assert!(dot.starts_with("digraph dd {") && dot.trim_end().ends_with('}'));
    let mut nodes = BTreeSet::new();
    let mut edges: BTreeMap<String, Vec<(String, i64, Rational)>> = BTreeMap::new();
    for line in dot.lines().map(str::trim) {
        let Some((head, rest)) = line.split_once(" [label=\"") else { continue };
        let label = rest.trim_end_matches("\"];");
        match head.split_once(" -> ") {
            Some((from, to)) => {
                let (l, c) = label.split_once(" (").unwrap();
                let cost = parse_rational(c.trim_end_matches(')')).unwrap();
                edges.entry(from.to_string()).or_default().push((to.to_string(), l.parse().unwrap(), cost));
            }
            None => {
                nodes.insert(head.to_string());
            }
        }
    }
    let mut out = BTreeMap::new();
    if nodes.is_empty() {
        return out;
    }
    let mut stack = vec![("n0_0".to_string(), Vec::new(), int(0))];
    while let Some((node, labels, cost)) = stack.pop() {
        assert!(nodes.contains(&node));
        match edges.get(&node) {
            None => *out.entry((labels, cost)).or_insert(0) += 1,
            Some(out_edges) => {
                for (to, l, c) in out_edges {
                    let mut next = labels.clone();
                    next.push(*l);
                    stack.push((to.clone(), next, &cost + c));
                }
            }
        }
    }
    out
}

/// Bounds need not tighten with every extra unit of width, since merging
/// is heuristic, but they always bracket the optimum and become exact once
/// the width reaches the exact diagram's.
#[test]
fn width_sweep_on_fixed_seeds() {
    let mut non_monotone = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_sequencing(&mut rng, 3 + seed as usize % 4);
        let model = job_sequencing_model(&inst);
        let best = int(sequencing_optimum(&inst));
        let full = compile_exact(&model, DEFAULT_EXACT_CAP).unwrap().width();
        let mut lows = Vec::new();
        let mut highs = Vec::new();
        for w in 1..=full {
            let (_, low) = compile_relaxed(&model, w).unwrap();
            let high = compile_restricted(&model, w).unwrap().1.unwrap().0;
            assert!(low <= best && best <= high, "seed {seed} width {w}");
            lows.push(low);
            highs.push(high);
        }
        assert_eq!(lows.last(), Some(&best), "seed {seed}");
        assert_eq!(highs.last(), Some(&best), "seed {seed}");
        if lows.windows(2).any(|p| p[1] < p[0]) || highs.windows(2).any(|p| p[1] > p[0]) {
            non_monotone += 1;
        }
    }
    println!("non-monotone width sweeps: {non_monotone} of 100");
}
