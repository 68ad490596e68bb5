//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here calls the solvers under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use logopt::clausal::Clause;
use logopt::dd::{Diagram, Objective, SequencingInstance};
use logopt::lbbd::SchedulingInstance;
use logopt::lp::LinearConstraint;
use logopt::rational::Rational;
use num::BigRational;
use rand::Rng;

pub fn int(v: i64) -> Rational {
    BigRational::from_integer(v.into())
}

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<i64>> {
    fn go(rest: &mut Vec<i64>, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for k in 0..rest.len() {
            let j = rest.remove(k);
            cur.push(j);
            go(rest, cur, out);
            cur.pop();
            rest.insert(k, j);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..=n as i64).collect(), &mut Vec::new(), &mut out);
    out
}

/// Cost of running jobs (1-based) in `order`, each as early as allowed.
pub fn sequence_cost(inst: &SequencingInstance, order: &[i64]) -> i64 {
    let mut t = 0;
    let mut tardiness = 0;
    for &j in order {
        let j = (j - 1) as usize;
        t = t.max(inst.release[j]) + inst.processing[j];
        tardiness += (t - inst.due[j]).max(0);
    }
    match inst.objective {
        Objective::Tardiness => tardiness,
        Objective::Makespan => t,
    }
}

pub fn sequencing_optimum(inst: &SequencingInstance) -> i64 {
    permutations(inst.release.len()).iter().map(|o| sequence_cost(inst, o)).min().expect("n >= 1")
}

pub fn random_sequencing<R: Rng>(rng: &mut R, n: usize) -> SequencingInstance {
    let release = (0..n).map(|_| rng.gen_range(0..=6)).collect();
    let processing = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    let due = (0..n).map(|_| rng.gen_range(1..=14)).collect();
    let objective = if rng.gen_bool(0.75) { Objective::Tardiness } else { Objective::Makespan };
    SequencingInstance::new(release, processing, due, objective).expect("valid ranges")
}

/// Follows `labels` from the root; the cost of that path, if it exists.
pub fn path_cost<S>(d: &Diagram<S>, labels: &[i64]) -> Option<Rational> {
    let mut node = 0;
    let mut cost = int(0);
    for (k, label) in labels.iter().enumerate() {
        let arc = d.layers.get(k)?.get(node)?.arcs.iter().find(|a| a.label == *label)?;
        cost += &arc.cost;
        node = arc.head;
    }
    (labels.len() + 1 == d.layers.len()).then_some(cost)
}

/// Minimum makespan of `jobs` on one cumulative resource by trying every
/// integer start in `[r_j, horizon - p_j]`, with `horizon = max r + Σ p`.
pub fn exhaustive_makespan(p: &[i64], r: &[i64], c: &[i64], capacity: i64) -> i64 {
    if p.is_empty() {
        return 0;
    }
    let horizon = r.iter().max().unwrap() + p.iter().sum::<i64>();
    let mut usage = vec![0i64; horizon as usize];
    let mut best = i64::MAX;
    #[allow(clippy::too_many_arguments)]
    fn go(j: usize, p: &[i64], r: &[i64], c: &[i64], cap: i64, finish: i64, usage: &mut [i64], best: &mut i64) {
        if j == p.len() {
            *best = (*best).min(finish);
            return;
        }
        for s in r[j]..=(usage.len() as i64 - p[j]) {
            let slots = s as usize..(s + p[j]) as usize;
            if usage[slots.clone()].iter().all(|&u| u + c[j] <= cap) {
                usage[slots.clone()].iter_mut().for_each(|u| *u += c[j]);
                go(j + 1, p, r, c, cap, finish.max(s + p[j]), usage, best);
                usage[slots].iter_mut().for_each(|u| *u -= c[j]);
            }
        }
    }
    go(0, p, r, c, capacity, 0, &mut usage, &mut best);
    best
}

/// Exact makespan of every (facility, job subset) pair, keyed by bitmask.
pub struct SubproblemTable {
    values: HashMap<(usize, u32), Option<i64>>,
}

impl SubproblemTable {
    pub fn new(inst: &SchedulingInstance) -> Self {
        let n = inst.release.len();
        let mut values = HashMap::new();
        for i in 0..inst.capacity.len() {
            for mask in 0u32..1 << n {
                let jobs: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
                let value = if jobs.iter().any(|&j| inst.rate[i][j] > inst.capacity[i]) {
                    None
                } else {
                    let p: Vec<i64> = jobs.iter().map(|&j| inst.processing[i][j]).collect();
                    let r: Vec<i64> = jobs.iter().map(|&j| inst.release[j]).collect();
                    let c: Vec<i64> = jobs.iter().map(|&j| inst.rate[i][j]).collect();
                    Some(exhaustive_makespan(&p, &r, &c, inst.capacity[i]))
                };
                values.insert((i, mask), value);
            }
        }
        SubproblemTable { values }
    }

    /// `None` when some job in `mask` does not fit on facility `i`.
    pub fn get(&self, i: usize, mask: u32) -> Option<i64> {
        self.values[&(i, mask)]
    }
}

/// Every assignment (job -> facility) with all jobs fitting, with the
/// per-facility exact makespans.
pub fn feasible_assignments(inst: &SchedulingInstance, table: &SubproblemTable) -> Vec<(Vec<usize>, Vec<i64>)> {
    let m = inst.capacity.len();
    let n = inst.release.len();
    let mut out = Vec::new();
    for code in 0..m.pow(n as u32) {
        let assign: Vec<usize> = (0..n).map(|j| code / m.pow(j as u32) % m).collect();
        let spans: Option<Vec<i64>> = (0..m)
            .map(|i| {
                let mask = (0..n).filter(|&j| assign[j] == i).fold(0u32, |acc, j| acc | 1 << j);
                table.get(i, mask)
            })
            .collect();
        if let Some(spans) = spans {
            out.push((assign, spans));
        }
    }
    out
}

/// Optimal overall makespan by assignment enumeration; `None` if no
/// assignment fits.
pub fn lbbd_oracle(inst: &SchedulingInstance, table: &SubproblemTable) -> Option<i64> {
    feasible_assignments(inst, table).iter().map(|(_, spans)| *spans.iter().max().unwrap()).min()
}

pub fn random_scheduling<R: Rng>(rng: &mut R, m: usize, n: usize) -> SchedulingInstance {
    let capacity: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
    let processing = (0..m).map(|_| (0..n).map(|_| rng.gen_range(1..=4)).collect()).collect();
    let release = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    let rate = capacity.iter().map(|&cap| (0..n).map(|_| rng.gen_range(1..=cap)).collect()).collect();
    SchedulingInstance::new(processing, release, rate, capacity).expect("valid ranges")
}

/// Values of the master variables for one assignment: `x{i}_{j}`, `M{i}`
/// and `M`.
pub fn master_point(assign: &[usize], spans: &[i64]) -> BTreeMap<String, Rational> {
    let mut point = BTreeMap::new();
    for (i, span) in spans.iter().enumerate() {
        for (j, &f) in assign.iter().enumerate() {
            point.insert(format!("x{}_{}", i + 1, j + 1), int((f == i) as i64));
        }
        point.insert(format!("M{}", i + 1), int(*span));
    }
    point.insert("M".into(), int(*spans.iter().max().unwrap()));
    point
}

/// All 0-1 points over `vars`.
pub fn binary_points(vars: &[String]) -> Vec<BTreeMap<String, Rational>> {
    (0u32..1 << vars.len())
        .map(|bits| vars.iter().enumerate().map(|(k, v)| (v.clone(), int((bits >> k & 1) as i64))).collect())
        .collect()
}

pub fn clause_holds(c: &Clause, point: &BTreeMap<String, bool>) -> bool {
    c.literals().any(|l| point.get(&l.var) == Some(&l.positive))
}

pub fn row_holds(row: &LinearConstraint, point: &BTreeMap<String, Rational>) -> bool {
    let lhs: Rational = row.coefficients().iter().map(|(v, a)| a * point.get(v).cloned().unwrap_or_else(|| int(0))).sum();
    row.relation().holds(&lhs, row.rhs())
}

pub fn to_bools(point: &BTreeMap<String, Rational>) -> BTreeMap<String, bool> {
    point.iter().map(|(v, x)| (v.clone(), *x == int(1))).collect()
}
