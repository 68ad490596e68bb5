use std::collections::BTreeMap;

use num::Zero;

use super::{Arc, DdError, Diagram, DpModel, Node};
use crate::rational::Rational;

/// Exact states allowed per layer by [`compile_exact`].
pub const DEFAULT_EXACT_CAP: usize = 100_000;

pub(crate) enum Policy<'a, S> {
    Exact { cap: usize },
    Relaxed { width: usize },
    Forced { layer: usize, states: &'a [S] },
    Restricted { width: usize },
}

struct Pending<S> {
    state: Option<S>,
    /// (parent index, label, cost)
    incoming: Vec<(usize, i64, Rational)>,
    exact: bool,
    value: Rational,
}

impl<S> Pending<S> {
    fn absorb(&mut self, other: Pending<S>) {
        self.incoming.extend(other.incoming);
        self.exact = false;
        if other.value < self.value {
            self.value = other.value;
        }
    }
}

fn merge_group<M: DpModel>(model: &M, group: Vec<Pending<M::State>>) -> Pending<M::State> {
    let merged = group
        .iter()
        .filter_map(|p| p.state.clone())
        .reduce(|a, b| model.merge(&a, &b))
        .expect("non-terminal states");
    let mut incoming = Vec::new();
    for p in &group {
        let original = p.state.as_ref().expect("non-terminal states");
        for (parent, label, cost) in &p.incoming {
            incoming.push((*parent, *label, model.relax_arc_cost(cost, original, &merged)));
        }
    }
    let value = group.iter().map(|p| p.value.clone()).min().expect("nonempty group");
    Pending { state: Some(merged), incoming, exact: false, value }
}

/// Compiles from `root` placed at model layer `start`.
pub(crate) fn compile_from<M: DpModel>(
    model: &M,
    root: M::State,
    start: usize,
    policy: &Policy<'_, M::State>,
) -> Result<Diagram<M::State>, DdError> {
    let n = model.layer_count();
    let mut layers: Vec<Vec<Node<M::State>>> = vec![vec![Node {
        state: Some(root),
        exact: true,
        value: Rational::zero(),
        arcs: Vec::new(),
    }]];
    for k in start..n {
        let parents = layers.last().expect("root layer");
        let terminal = k + 1 == n;
        let mut children: BTreeMap<Option<M::State>, Pending<M::State>> = BTreeMap::new();
        for (pi, parent) in parents.iter().enumerate() {
            let state = parent.state.as_ref().expect("interior node");
            for control in model.control_domain(k) {
                let Some(next) = model.transition(state, k, control) else { continue };
                let cost = model.arc_cost(state, k, control);
                let value = &parent.value + &cost;
                let key = if terminal { None } else { Some(next) };
                let entry = children.entry(key.clone()).or_insert_with(|| Pending {
                    state: key,
                    incoming: Vec::new(),
                    exact: true,
                    value: value.clone(),
                });
                entry.incoming.push((pi, control, cost));
                entry.exact &= parent.exact;
                if value < entry.value {
                    entry.value = value;
                }
            }
        }

        if !terminal {
            children = shape_layer(model, children, k + 1, policy)?;
            // Merging may have re-costed incoming arcs.
            for p in children.values_mut() {
                p.value = p
                    .incoming
                    .iter()
                    .map(|(pi, _, cost)| &parents[*pi].value + cost)
                    .min()
                    .expect("every child has a parent");
            }
        }

        let next_index = layers.len();
        let mut next_layer = Vec::with_capacity(children.len());
        for (head, (_, p)) in children.into_iter().enumerate() {
            for (pi, label, cost) in p.incoming {
                layers[next_index - 1][pi].arcs.push(Arc { label, cost, head });
            }
            next_layer.push(Node { state: p.state, exact: p.exact, value: p.value, arcs: Vec::new() });
        }
        for node in layers[next_index - 1].iter_mut() {
            node.arcs.sort_by_key(|a| a.label);
        }
        let empty = next_layer.is_empty();
        layers.push(next_layer);
        if empty {
            break;
        }
    }
    Ok(prune(Diagram { start_layer: start, layers }, n - start + 1))
}

type Children<S> = BTreeMap<Option<S>, Pending<S>>;

fn shape_layer<M: DpModel>(
    model: &M,
    mut children: Children<M::State>,
    layer: usize,
    policy: &Policy<'_, M::State>,
) -> Result<Children<M::State>, DdError> {
    match *policy {
        Policy::Exact { cap } => {
            if children.len() > cap {
                return Err(DdError::WidthCapExceeded { layer, width: children.len(), cap });
            }
        }
        Policy::Relaxed { width } if children.len() > width => {
            // Worst first: largest value, then largest state.
            let mut order: Vec<(Rational, Option<M::State>)> =
                children.values().map(|p| (p.value.clone(), p.state.clone())).collect();
            order.sort_by(|a, b| b.cmp(a));
            let worst = children.len() - width + 1;
            let group: Vec<Pending<M::State>> =
                order[..worst].iter().map(|(_, s)| children.remove(s).expect("present")).collect();
            put(&mut children, merge_group(model, group));
        }
        Policy::Forced { layer: target, states } if target == layer => {
            let keys: Vec<Option<M::State>> = states.iter().cloned().map(Some).collect();
            if keys.len() < 2 || keys.iter().any(|k| !children.contains_key(k)) {
                return Err(DdError::MergeStatesMissing(layer));
            }
            let group = keys.iter().map(|k| children.remove(k).expect("present")).collect();
            put(&mut children, merge_group(model, group));
        }
        Policy::Restricted { width } if children.len() > width => {
            let mut order: Vec<(Rational, Option<M::State>)> =
                children.values().map(|p| (p.value.clone(), p.state.clone())).collect();
            order.sort();
            for (_, s) in &order[width..] {
                children.remove(s);
            }
        }
        _ => {}
    }
    Ok(children)
}

fn put<S: Ord + Clone>(layer: &mut BTreeMap<Option<S>, Pending<S>>, p: Pending<S>) {
    match layer.get_mut(&p.state) {
        Some(existing) => existing.absorb(p),
        None => {
            layer.insert(p.state.clone(), p);
        }
    }
}

/// Drops nodes that cannot reach the terminal. `full_len` is the layer
/// count of a complete diagram; anything shorter has no paths.
fn prune<S: Clone>(d: Diagram<S>, full_len: usize) -> Diagram<S> {
    if d.layers.len() < full_len || d.layers.last().is_none_or(Vec::is_empty) {
        return Diagram { start_layer: d.start_layer, layers: Vec::new() };
    }
    let mut layers = d.layers;
    let mut keep: Vec<Option<usize>> = (0..layers[layers.len() - 1].len()).map(Some).collect();
    for k in (0..layers.len() - 1).rev() {
        let mut next_keep = Vec::with_capacity(layers[k].len());
        let mut count = 0;
        for node in layers[k].iter_mut() {
            node.arcs.retain_mut(|a| match keep[a.head] {
                Some(h) => {
                    a.head = h;
                    true
                }
                None => false,
            });
            if node.arcs.is_empty() {
                next_keep.push(None);
            } else {
                next_keep.push(Some(count));
                count += 1;
            }
        }
        let mut it = next_keep.iter();
        let mut k_layer = std::mem::take(&mut layers[k]);
        k_layer.retain(|_| it.next().expect("same length").is_some());
        layers[k] = k_layer;
        keep = next_keep;
    }
    if layers[0].is_empty() {
        layers.clear();
    }
    Diagram { start_layer: d.start_layer, layers }
}

/// Every feasible solution as a root–terminal path, states deduplicated.
pub fn compile_exact<M: DpModel>(model: &M, cap: usize) -> Result<Diagram<M::State>, DdError> {
    compile_from(model, model.initial_state(), 0, &Policy::Exact { cap })
}

/// Relaxed diagram of width at most `max_width` and its lower bound.
///
/// When a layer is too wide its worst nodes (largest value from the root)
/// are merged into one node.
pub fn compile_relaxed<M: DpModel>(model: &M, max_width: usize) -> Result<(Diagram<M::State>, Rational), DdError> {
    if max_width == 0 {
        return Err(DdError::ZeroWidth);
    }
    let d = compile_from(model, model.initial_state(), 0, &Policy::Relaxed { width: max_width })?;
    let (bound, _) = super::shortest_path(&d)?;
    Ok((d, bound))
}

/// Exact compilation except that the nodes holding `states` on `layer` are
/// merged into one.
pub fn compile_relaxed_forced<M: DpModel>(
    model: &M,
    layer: usize,
    states: &[M::State],
) -> Result<(Diagram<M::State>, Rational), DdError> {
    let d = compile_from(model, model.initial_state(), 0, &Policy::Forced { layer, states })?;
    let (bound, _) = super::shortest_path(&d)?;
    Ok((d, bound))
}

/// Restricted diagram keeping the `max_width` best nodes of each layer,
/// with its best path as a feasible solution and upper bound.
#[allow(clippy::type_complexity)]
pub fn compile_restricted<M: DpModel>(
    model: &M,
    max_width: usize,
) -> Result<(Diagram<M::State>, Option<(Rational, Vec<i64>)>), DdError> {
    if max_width == 0 {
        return Err(DdError::ZeroWidth);
    }
    let d = compile_from(model, model.initial_state(), 0, &Policy::Restricted { width: max_width })?;
    let best = super::shortest_path(&d).ok();
    Ok((d, best))
}

/// Bottom-up merge of nodes whose outgoing arcs (label, cost, head) agree.
/// The merged node keeps the first state; the path multiset is unchanged.
pub fn reduce<S: Clone>(d: &Diagram<S>) -> Diagram<S> {
    let mut layers = d.layers.clone();
    if layers.len() < 2 {
        return Diagram { start_layer: d.start_layer, layers };
    }
    for k in (0..layers.len() - 1).rev() {
        let mut signature_to_new: BTreeMap<Vec<(i64, Rational, usize)>, usize> = BTreeMap::new();
        let mut remap = Vec::with_capacity(layers[k].len());
        let mut merged: Vec<Node<S>> = Vec::new();
        for node in std::mem::take(&mut layers[k]) {
            let sig: Vec<(i64, Rational, usize)> = node.arcs.iter().map(|a| (a.label, a.cost.clone(), a.head)).collect();
            match signature_to_new.get(&sig) {
                Some(&j) => {
                    let target = &mut merged[j];
                    target.exact &= node.exact;
                    if node.value < target.value {
                        target.value = node.value;
                    }
                    remap.push(j);
                }
                None => {
                    signature_to_new.insert(sig, merged.len());
                    remap.push(merged.len());
                    merged.push(node);
                }
            }
        }
        layers[k] = merged;
        if k > 0 {
            for node in layers[k - 1].iter_mut() {
                for a in node.arcs.iter_mut() {
                    a.head = remap[a.head];
                }
            }
        }
    }
    Diagram { start_layer: d.start_layer, layers }
}
