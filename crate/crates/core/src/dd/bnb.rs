use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use num::Zero;

use super::compile::{compile_from, Policy};
use super::{shortest_path, DdError, DpModel};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BnbOutcome {
    /// Bound no better than the incumbent.
    Pruned,
    /// The relaxed diagram was exact, so its optimum closed the node.
    Solved,
    /// No feasible completion.
    Infeasible,
    /// Subproblems created from the last exact layer.
    Branched(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnbLogEntry {
    pub layer: usize,
    pub state: String,
    /// Bound the node was queued with.
    pub bound: Rational,
    pub incumbent: Option<Rational>,
    pub outcome: BnbOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnbResult {
    /// `None` when the model has no feasible solution.
    pub value: Option<Rational>,
    pub solution: Vec<i64>,
    pub log: Vec<BnbLogEntry>,
}

struct Open<S> {
    bound: Rational,
    layer: usize,
    state: S,
    seq: usize,
    prefix_cost: Rational,
    prefix: Vec<i64>,
}

impl<S: Ord> Open<S> {
    fn key(&self) -> (&Rational, usize, &S, usize) {
        (&self.bound, self.layer, &self.state, self.seq)
    }
}

impl<S: Ord> PartialEq for Open<S> {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl<S: Ord> Eq for Open<S> {}

impl<S: Ord> PartialOrd for Open<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Ord> Ord for Open<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Branch-and-bound over relaxed decision diagrams of width `max_width`.
///
/// Each open node is a state on some layer together with the best prefix
/// that reaches it. Its restricted diagram may improve the incumbent and its
/// relaxed diagram gives a bound; when that diagram is inexact the nodes of
/// its last exact layer become new open nodes. Nodes are taken best bound
/// first, ties by layer and then state.
pub fn solve_bnb<M: DpModel>(model: &M, max_width: usize) -> Result<BnbResult, DdError> {
    if max_width == 0 {
        return Err(DdError::ZeroWidth);
    }
    let n = model.layer_count();
    let mut heap = BinaryHeap::new();
    let mut seq = 0;
    heap.push(Reverse(Open {
        bound: Rational::zero(),
        layer: 0,
        state: model.initial_state(),
        seq,
        prefix_cost: Rational::zero(),
        prefix: Vec::new(),
    }));
    let mut incumbent: Option<(Rational, Vec<i64>)> = None;
    let mut log = Vec::new();

    let improve = |incumbent: &mut Option<(Rational, Vec<i64>)>, value: Rational, labels: Vec<i64>| {
        if incumbent.as_ref().is_none_or(|(best, _)| value < *best) {
            *incumbent = Some((value, labels));
        }
    };

    while let Some(Reverse(open)) = heap.pop() {
        let mut entry = BnbLogEntry {
            layer: open.layer,
            state: open.state.to_string(),
            bound: open.bound.clone(),
            incumbent: incumbent.as_ref().map(|(v, _)| v.clone()),
            outcome: BnbOutcome::Pruned,
        };
        let beaten = |incumbent: &Option<(Rational, Vec<i64>)>, bound: &Rational| {
            incumbent.as_ref().is_some_and(|(best, _)| bound >= best)
        };
        if beaten(&incumbent, &open.bound) {
            log.push(entry);
            continue;
        }

        let restricted = compile_from(model, open.state.clone(), open.layer, &Policy::Restricted { width: max_width })?;
        if let Ok((value, labels)) = shortest_path(&restricted) {
            let mut full = open.prefix.clone();
            full.extend(labels);
            improve(&mut incumbent, &open.prefix_cost + value, full);
        }

        let relaxed = compile_from(model, open.state.clone(), open.layer, &Policy::Relaxed { width: max_width })?;
        let Ok((relaxed_value, relaxed_labels)) = shortest_path(&relaxed) else {
            entry.outcome = BnbOutcome::Infeasible;
            log.push(entry);
            continue;
        };
        let bound = &open.prefix_cost + &relaxed_value;
        if relaxed.is_exact() {
            let mut full = open.prefix.clone();
            full.extend(relaxed_labels);
            improve(&mut incumbent, bound, full);
            entry.outcome = BnbOutcome::Solved;
            log.push(entry);
            continue;
        }
        if beaten(&incumbent, &bound) {
            log.push(entry);
            continue;
        }

        let last_exact = relaxed
            .layers
            .iter()
            .rposition(|layer| layer.iter().all(|node| node.exact))
            .expect("the root is exact");
        let mut children = 0;
        if last_exact == 0 {
            // Nothing below the root survived exactly: branch on its arcs.
            for control in model.control_domain(open.layer) {
                let Some(next) = model.transition(&open.state, open.layer, control) else { continue };
                let cost = &open.prefix_cost + model.arc_cost(&open.state, open.layer, control);
                let mut prefix = open.prefix.clone();
                prefix.push(control);
                if open.layer + 1 == n {
                    improve(&mut incumbent, cost, prefix);
                    continue;
                }
                seq += 1;
                children += 1;
                heap.push(Reverse(Open {
                    bound: bound.clone().max(cost.clone()),
                    layer: open.layer + 1,
                    state: next,
                    seq,
                    prefix_cost: cost,
                    prefix,
                }));
            }
        } else {
            let ctg = relaxed.cost_to_go();
            for (i, node) in relaxed.layers[last_exact].iter().enumerate() {
                let state = node.state.clone().expect("the terminal layer is inexact here");
                let mut prefix = open.prefix.clone();
                prefix.extend(relaxed.prefix_to(last_exact, i));
                seq += 1;
                children += 1;
                heap.push(Reverse(Open {
                    bound: &open.prefix_cost + &node.value + &ctg[last_exact][i],
                    layer: open.layer + last_exact,
                    state,
                    seq,
                    prefix_cost: &open.prefix_cost + &node.value,
                    prefix,
                }));
            }
        }
        entry.outcome = BnbOutcome::Branched(children);
        log.push(entry);
    }

    Ok(match incumbent {
        Some((value, solution)) => BnbResult { value: Some(value), solution, log },
        None => BnbResult { value: None, solution: Vec::new(), log },
    })
}
