//! Decision diagrams compiled top-down from dynamic programming models.
//!
//! A [`Diagram`] has one layer per decision plus a terminal layer. Exact
//! diagrams represent every feasible solution as a root–terminal path;
//! relaxed diagrams merge nodes to bound the optimum from below, restricted
//! diagrams drop nodes to find feasible solutions quickly. [`solve_bnb`]
//! combines both.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num::Zero;
use thiserror::Error;

use crate::rational::Rational;

mod bnb;
mod compile;
pub mod sequencing;

pub use bnb::{solve_bnb, BnbLogEntry, BnbOutcome, BnbResult};
pub use compile::{
    compile_exact, compile_relaxed, compile_relaxed_forced, compile_restricted, reduce, DEFAULT_EXACT_CAP,
};
pub use sequencing::{job_sequencing_model, Objective, SeqState, SequencingInstance, SequencingModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DdError {
    #[error("layer {layer} has {width} exact states, above the cap of {cap}; use a relaxed diagram instead")]
    WidthCapExceeded { layer: usize, width: usize, cap: usize },
    #[error("diagram has no root-terminal path")]
    Empty,
    #[error("width must be at least 1")]
    ZeroWidth,
    #[error("operation needs an exact diagram")]
    NotExact,
    #[error("layer {0} does not hold the states to merge")]
    MergeStatesMissing(usize),
}

/// A dynamic programming formulation over `layer_count` decisions.
///
/// States are deduplicated by their `Ord` order, which serves as the
/// canonical key.
pub trait DpModel {
    type State: Clone + Ord + fmt::Debug + fmt::Display;

    fn layer_count(&self) -> usize;
    fn control_domain(&self, layer: usize) -> Vec<i64>;
    fn initial_state(&self) -> Self::State;
    /// `None` when `control` is infeasible in `state`.
    fn transition(&self, state: &Self::State, layer: usize, control: i64) -> Option<Self::State>;
    fn arc_cost(&self, state: &Self::State, layer: usize, control: i64) -> Rational;
    /// Relaxation operator; must not exclude any completion of `a` or `b`
    /// nor raise their costs.
    fn merge(&self, a: &Self::State, b: &Self::State) -> Self::State;

    /// Cost of an arc whose head moves from `original` to the merged state.
    fn relax_arc_cost(&self, cost: &Rational, _original: &Self::State, _merged: &Self::State) -> Rational {
        cost.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub label: i64,
    pub cost: Rational,
    /// Index into the next layer.
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node<S> {
    /// `None` for the terminal.
    pub state: Option<S>,
    /// Never merged and every ancestor exact.
    pub exact: bool,
    /// Shortest-path value from the root.
    pub value: Rational,
    /// Sorted by label.
    pub arcs: Vec<Arc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram<S> {
    /// Layer index of the root within the model.
    pub start_layer: usize,
    pub layers: Vec<Vec<Node<S>>>,
}

impl<S: Clone + fmt::Display> Diagram<S> {
    pub fn empty(start_layer: usize) -> Self {
        Diagram { start_layer, layers: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.layers.first().is_none_or(Vec::is_empty)
    }

    pub fn node_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn arc_count(&self) -> usize {
        self.layers.iter().flatten().map(|n| n.arcs.len()).sum()
    }

    pub fn width(&self) -> usize {
        self.layers.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_exact(&self) -> bool {
        self.layers.iter().flatten().all(|n| n.exact)
    }

    /// Minimum cost from each node to the terminal.
    pub fn cost_to_go(&self) -> Vec<Vec<Rational>> {
        let mut ctg: Vec<Vec<Rational>> = self.layers.iter().map(|l| vec![Rational::zero(); l.len()]).collect();
        for k in (0..self.layers.len().saturating_sub(1)).rev() {
            for (i, node) in self.layers[k].iter().enumerate() {
                ctg[k][i] = node
                    .arcs
                    .iter()
                    .map(|a| &a.cost + &ctg[k + 1][a.head])
                    .min()
                    .expect("every node reaches the terminal");
            }
        }
        ctg
    }

    /// Number of root–terminal paths.
    pub fn path_count(&self) -> u128 {
        if self.is_empty() {
            return 0;
        }
        let mut count: Vec<u128> = vec![1; self.layers.last().map_or(0, Vec::len)];
        for k in (0..self.layers.len() - 1).rev() {
            count = self.layers[k]
                .iter()
                .map(|n| n.arcs.iter().map(|a| count[a.head]).fold(0u128, u128::saturating_add))
                .collect();
        }
        count[0]
    }

    /// Every root–terminal path as (labels, cost), in label order.
    pub fn paths(&self) -> Vec<(Vec<i64>, Rational)> {
        self.paths_within(None)
    }

    fn paths_within(&self, limit: Option<&Rational>) -> Vec<(Vec<i64>, Rational)> {
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let ctg = self.cost_to_go();
        let mut labels = Vec::new();
        self.walk(0, 0, &Rational::zero(), &ctg, limit, &mut labels, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        layer: usize,
        idx: usize,
        cost: &Rational,
        ctg: &[Vec<Rational>],
        limit: Option<&Rational>,
        labels: &mut Vec<i64>,
        out: &mut Vec<(Vec<i64>, Rational)>,
    ) {
        if limit.is_some_and(|l| cost + &ctg[layer][idx] > *l) {
            return;
        }
        if layer + 1 == self.layers.len() {
            out.push((labels.clone(), cost.clone()));
            return;
        }
        for arc in &self.layers[layer][idx].arcs {
            labels.push(arc.label);
            self.walk(layer + 1, arc.head, &(cost + &arc.cost), ctg, limit, labels, out);
            labels.pop();
        }
    }

    /// Labels of a shortest root path to node `idx` of `layer`.
    pub fn prefix_to(&self, layer: usize, idx: usize) -> Vec<i64> {
        let mut labels = Vec::new();
        let (mut k, mut i) = (layer, idx);
        while k > 0 {
            let target = &self.layers[k][i].value;
            let (p, label) = self.layers[k - 1]
                .iter()
                .enumerate()
                .flat_map(|(p, n)| n.arcs.iter().map(move |a| (p, n, a)))
                .filter(|(_, n, a)| a.head == i && &(&n.value + &a.cost) == target)
                .map(|(p, _, a)| (p, a.label))
                .min_by_key(|&(_, label)| label)
                .expect("node value is attained by a parent");
            labels.push(label);
            k -= 1;
            i = p;
        }
        labels.reverse();
        labels
    }
}

/// Shortest root–terminal path; ties go to the lexicographically smallest
/// label sequence.
pub fn shortest_path<S: Clone + fmt::Display>(d: &Diagram<S>) -> Result<(Rational, Vec<i64>), DdError> {
    if d.is_empty() {
        return Err(DdError::Empty);
    }
    let ctg = d.cost_to_go();
    let mut labels = Vec::new();
    let mut idx = 0;
    for k in 0..d.layers.len() - 1 {
        let arc = d.layers[k][idx]
            .arcs
            .iter()
            .filter(|a| &a.cost + &ctg[k + 1][a.head] == ctg[k][idx])
            .min_by_key(|a| a.label)
            .expect("optimal arc exists");
        labels.push(arc.label);
        idx = arc.head;
    }
    Ok((ctg[0][0].clone(), labels))
}

/// All paths within `delta` of the optimum (`None` for every path), sorted
/// by cost and then by labels.
pub fn enumerate_near_optimal<S: Clone + fmt::Display>(
    d: &Diagram<S>,
    delta: Option<&Rational>,
) -> Result<Vec<(Vec<i64>, Rational)>, DdError> {
    if !d.is_exact() {
        return Err(DdError::NotExact);
    }
    if d.is_empty() {
        return Ok(Vec::new());
    }
    let limit = delta.map(|delta| &d.cost_to_go()[0][0] + delta);
    let mut out = d.paths_within(limit.as_ref());
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

fn dot_escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: nodes show their state and cost-to-go in
/// parentheses, arcs show `label (cost)`.
pub fn export_dot<S: Clone + fmt::Display>(d: &Diagram<S>) -> String {
    let mut out = String::from("digraph dd {\n");
    if !d.is_empty() {
        let ctg = d.cost_to_go();
        for (k, layer) in d.layers.iter().enumerate() {
            for (i, node) in layer.iter().enumerate() {
                let state = node.state.as_ref().map_or_else(|| "t".to_string(), ToString::to_string);
                let _ = writeln!(out, "  n{k}_{i} [label=\"{} ({})\"];", dot_escape(&state), ctg[k][i]);
            }
        }
        for (k, layer) in d.layers.iter().enumerate() {
            for (i, node) in layer.iter().enumerate() {
                for a in &node.arcs {
                    let _ = writeln!(out, "  n{k}_{i} -> n{}_{} [label=\"{} ({})\"];", k + 1, a.head, a.label, a.cost);
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Paths grouped by cost, handy for comparing diagrams.
pub fn path_multiset<S: Clone + fmt::Display>(d: &Diagram<S>) -> BTreeMap<(Vec<i64>, Rational), usize> {
    let mut out = BTreeMap::new();
    for p in d.paths() {
        *out.entry(p).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn example() -> SequencingModel {
        job_sequencing_model(&SequencingInstance::three_job_example())
    }

    #[test]
    fn exact_diagram_has_every_sequence() {
        let d = compile_exact(&example(), DEFAULT_EXACT_CAP).unwrap();
        assert_eq!(d.path_count(), 6);
        assert!(d.is_exact());
        let layer2: Vec<String> = d.layers[2].iter().map(|n| n.state.as_ref().unwrap().to_string()).collect();
        assert_eq!(layer2, ["({1,2},5)", "({1,2},6)", "({1,3},5)", "({1,3},6)", "({2,3},5)"]);
    }

    #[test]
    fn shortest_path_of_example() {
        let d = compile_exact(&example(), DEFAULT_EXACT_CAP).unwrap();
        assert_eq!(shortest_path(&d).unwrap(), (int(3), vec![2, 3, 1]));
    }

    #[test]
    fn forced_merge_bound() {
        let states = [SeqState::new([1, 2], 6), SeqState::new([2, 3], 5)];
        let (d, bound) = compile_relaxed_forced(&example(), 2, &states).unwrap();
        assert_eq!(bound, int(2));
        assert_eq!(d.layers[2].len(), 4);
        assert!(d.layers[2].iter().any(|n| !n.exact && n.state == Some(SeqState::new([2], 5))));
        assert_eq!(
            compile_relaxed_forced(&example(), 2, &states[..1]),
            Err(DdError::MergeStatesMissing(2))
        );
    }

    #[test]
    fn wide_relaxation_is_exact() {
        let (d, bound) = compile_relaxed(&example(), 100).unwrap();
        assert!(d.is_exact());
        assert_eq!(bound, int(3));
        let (d1, bound1) = compile_relaxed(&example(), 1).unwrap();
        assert!(d1.width() <= 1 || d1.layers[1..d1.layers.len() - 1].iter().all(|l| l.len() == 1));
        assert!(bound1 <= int(3));
    }

    #[test]
    fn restricted_gives_feasible_sequences() {
        let (_, best) = compile_restricted(&example(), 100).unwrap();
        assert_eq!(best.unwrap().0, int(3));
        let (d, best) = compile_restricted(&example(), 1).unwrap();
        let (value, labels) = best.unwrap();
        assert_eq!(d.path_count(), 1);
        let jobs: Vec<usize> = labels.iter().map(|&l| l as usize).collect();
        assert_eq!(SequencingInstance::three_job_example().cost_of(&jobs), Some(value.clone()));
        assert!(value >= int(3));
    }

    #[test]
    fn zero_width_rejected() {
        assert_eq!(compile_relaxed(&example(), 0).unwrap_err(), DdError::ZeroWidth);
        assert_eq!(compile_restricted(&example(), 0).unwrap_err(), DdError::ZeroWidth);
        assert_eq!(solve_bnb(&example(), 0).unwrap_err(), DdError::ZeroWidth);
    }

    #[test]
    fn cap_exceeded() {
        assert!(matches!(
            compile_exact(&example(), 2),
            Err(DdError::WidthCapExceeded { layer: 1, width: 3, cap: 2 })
        ));
    }

    #[test]
    fn reduce_keeps_paths() {
        let d = compile_exact(&example(), DEFAULT_EXACT_CAP).unwrap();
        let r = reduce(&d);
        assert_eq!(path_multiset(&d), path_multiset(&r));
        assert!(r.node_count() <= d.node_count());
        assert_eq!(reduce(&r), r);
    }

    #[test]
    fn reduce_merges_identical_suffixes() {
        let inst = SequencingInstance::new(vec![0, 0, 0], vec![1, 1, 1], vec![9, 9, 9], Objective::Tardiness).unwrap();
        let d = compile_exact(&job_sequencing_model(&inst), DEFAULT_EXACT_CAP).unwrap();
        assert_eq!(path_multiset(&d), path_multiset(&reduce(&d)));

        // Hand-built: two layer-1 nodes with identical arcs.
        let mut manual = d.clone();
        manual.layers = vec![
            vec![Node { state: None, exact: true, value: int(0), arcs: vec![
                Arc { label: 1, cost: int(0), head: 0 },
                Arc { label: 2, cost: int(0), head: 1 },
            ] }],
            vec![
                Node { state: None, exact: true, value: int(0), arcs: vec![Arc { label: 7, cost: int(1), head: 0 }] },
                Node { state: None, exact: true, value: int(0), arcs: vec![Arc { label: 7, cost: int(1), head: 0 }] },
            ],
            vec![Node { state: None, exact: true, value: int(1), arcs: vec![] }],
        ];
        let reduced: Diagram<SeqState> = reduce(&manual);
        assert_eq!(reduced.node_count(), manual.node_count() - 1);
        assert_eq!(path_multiset(&reduced), path_multiset(&manual));
    }

    #[test]
    fn near_optimal_lists() {
        let d = compile_exact(&example(), DEFAULT_EXACT_CAP).unwrap();
        let best = enumerate_near_optimal(&d, Some(&int(0))).unwrap();
        assert_eq!(best, vec![(vec![2, 3, 1], int(3))]);
        assert_eq!(enumerate_near_optimal(&d, None).unwrap().len(), 6);
        let within1: Vec<Vec<i64>> = enumerate_near_optimal(&d, Some(&int(1))).unwrap().into_iter().map(|p| p.0).collect();
        assert_eq!(within1, vec![vec![2, 3, 1], vec![1, 2, 3], vec![1, 3, 2], vec![2, 1, 3]]);
        let (relaxed, _) = compile_relaxed(&example(), 1).unwrap();
        assert_eq!(enumerate_near_optimal(&relaxed, None), Err(DdError::NotExact));
    }

    #[test]
    fn dot_output() {
        let one = SequencingInstance::new(vec![0], vec![2], vec![5], Objective::Tardiness).unwrap();
        let d = compile_exact(&job_sequencing_model(&one), DEFAULT_EXACT_CAP).unwrap();
        let dot = export_dot(&d);
        assert_eq!(dot.lines().count(), 5);
        assert!(dot.contains("[label=\"({},0) (0)\"]"));
        assert!(dot.contains("n0_0 -> n1_0 [label=\"1 (0)\"]"));
        assert_eq!(export_dot(&Diagram::<SeqState>::empty(0)), "digraph dd {\n}\n");
    }

    #[test]
    fn bnb_matches_exact() {
        for width in 1..=6 {
            let r = solve_bnb(&example(), width).unwrap();
            assert_eq!(r.value, Some(int(3)), "width {width}");
            let jobs: Vec<usize> = r.solution.iter().map(|&l| l as usize).collect();
            assert_eq!(SequencingInstance::three_job_example().cost_of(&jobs), Some(int(3)));
        }
        let wide = solve_bnb(&example(), 100).unwrap();
        assert_eq!(wide.log.len(), 1);
        assert_eq!(wide.log[0].outcome, BnbOutcome::Solved);
    }

    #[test]
    fn prefix_reconstruction() {
        let d = compile_exact(&example(), DEFAULT_EXACT_CAP).unwrap();
        let target = d.layers[2].iter().position(|n| n.state == Some(SeqState::new([1, 2], 5))).unwrap();
        assert_eq!(d.prefix_to(2, target), vec![1, 2]);
    }
}
