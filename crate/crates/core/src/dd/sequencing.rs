//! Single-machine job sequencing with release times and due dates.
//!
//! Layer `i` picks the job in position `i + 1`. A state is the set of jobs
//! already sequenced and the finish time of the last one. Jobs are numbered
//! from 1.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};


use super::DpModel;
use crate::error::ParseError;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Σ max(0, finish_j − d_j)
    Tardiness,
    /// Finish time of the last job.
    Makespan,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Tardiness => "tardiness",
            Objective::Makespan => "makespan",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencingInstance {
    pub release: Vec<i64>,
    pub processing: Vec<i64>,
    pub due: Vec<i64>,
    pub objective: Objective,
}

impl SequencingInstance {
    pub fn new(release: Vec<i64>, processing: Vec<i64>, due: Vec<i64>, objective: Objective) -> Result<Self, String> {
        if release.len() != processing.len() || release.len() != due.len() {
            return Err("release, processing and due lists differ in length".into());
        }
        if let Some(j) = release.iter().position(|&r| r < 0) {
            return Err(format!("job {} has a negative release time", j + 1));
        }
        if let Some(j) = processing.iter().position(|&p| p < 1) {
            return Err(format!("job {} has processing time below 1", j + 1));
        }
        Ok(SequencingInstance { release, processing, due, objective })
    }

    /// Three jobs with r = (0,1,1), p = (3,2,2), d = (5,3,5), total tardiness.
    pub fn three_job_example() -> Self {
        SequencingInstance::new(vec![0, 1, 1], vec![3, 2, 2], vec![5, 3, 5], Objective::Tardiness).expect("valid")
    }

    pub fn job_count(&self) -> usize {
        self.release.len()
    }

    /// Objective value of the sequence `jobs` (1-based ids); `None` unless
    /// it is a permutation of all jobs.
    pub fn cost_of(&self, jobs: &[usize]) -> Option<Rational> {
        let n = self.job_count();
        let distinct: BTreeSet<usize> = jobs.iter().copied().collect();
        if jobs.len() != n || distinct.len() != n || jobs.iter().any(|&j| j == 0 || j > n) {
            return None;
        }
        let mut t = 0;
        let mut tardiness = 0;
        for &j in jobs {
            t = t.max(self.release[j - 1]) + self.processing[j - 1];
            tardiness += (t - self.due[j - 1]).max(0);
        }
        Some(int(match self.objective {
            Objective::Tardiness => tardiness,
            Objective::Makespan => t,
        }))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.job_count(), self.objective.name());
        for j in 0..self.job_count() {
            let _ = writeln!(out, "{} {} {}", self.release[j], self.processing[j], self.due[j]);
        }
        out
    }
}

/// Header `n objective`, then one `r p d` line per job. `#` starts a comment.
pub fn parse_sequencing(text: &str) -> Result<SequencingInstance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| ParseError::new(1, "empty instance"))?;
    let [n, objective] = header.split_whitespace().collect::<Vec<_>>()[..] else {
        return Err(ParseError::new(hline, "header must read 'n objective'"));
    };
    let n: usize = n.parse().map_err(|_| ParseError::new(hline, format!("bad job count {n:?}")))?;
    let objective = match objective {
        "tardiness" => Objective::Tardiness,
        "makespan" => Objective::Makespan,
        other => return Err(ParseError::new(hline, format!("unknown objective {other:?}"))),
    };
    let (mut r, mut p, mut d) = (Vec::new(), Vec::new(), Vec::new());
    let mut last = hline;
    for (line, content) in lines {
        last = line;
        let nums = content
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| ParseError::new(line, format!("bad integer {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let [rj, pj, dj] = nums[..] else {
            return Err(ParseError::new(line, "job line must read 'r p d'"));
        };
        r.push(rj);
        p.push(pj);
        d.push(dj);
    }
    if r.len() != n {
        return Err(ParseError::new(last, format!("header declares {n} jobs, found {}", r.len())));
    }
    SequencingInstance::new(r, p, d, objective).map_err(|e| ParseError::new(last, e))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeqState {
    pub assigned: BTreeSet<usize>,
    pub finish: i64,
}

impl SeqState {
    pub fn new<I: IntoIterator<Item = usize>>(assigned: I, finish: i64) -> Self {
        SeqState { assigned: assigned.into_iter().collect(), finish }
    }
}

/// Written `({1,2},6)`.
impl fmt::Display for SeqState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let jobs: Vec<String> = self.assigned.iter().map(ToString::to_string).collect();
        write!(f, "({{{}}},{})", jobs.join(","), self.finish)
    }
}

#[derive(Debug, Clone)]
pub struct SequencingModel {
    pub instance: SequencingInstance,
}

pub fn job_sequencing_model(inst: &SequencingInstance) -> SequencingModel {
    SequencingModel { instance: inst.clone() }
}

impl SequencingModel {
    fn finish_after(&self, state: &SeqState, job: usize) -> i64 {
        let i = &self.instance;
        state.finish.max(i.release[job - 1]) + i.processing[job - 1]
    }
}

impl DpModel for SequencingModel {
    type State = SeqState;

    fn layer_count(&self) -> usize {
        self.instance.job_count()
    }

    fn control_domain(&self, _layer: usize) -> Vec<i64> {
        (1..=self.instance.job_count() as i64).collect()
    }

    fn initial_state(&self) -> SeqState {
        SeqState::new([], 0)
    }

    fn transition(&self, state: &SeqState, _layer: usize, control: i64) -> Option<SeqState> {
        let job = usize::try_from(control).ok().filter(|&j| j >= 1 && j <= self.instance.job_count())?;
        if state.assigned.contains(&job) {
            return None;
        }
        let mut assigned = state.assigned.clone();
        assigned.insert(job);
        Some(SeqState { assigned, finish: self.finish_after(state, job) })
    }

    fn arc_cost(&self, state: &SeqState, _layer: usize, control: i64) -> Rational {
        let job = control as usize;
        let finish = self.finish_after(state, job);
        int(match self.instance.objective {
            Objective::Tardiness => (finish - self.instance.due[job - 1]).max(0),
            Objective::Makespan => finish - state.finish,
        })
    }

    fn merge(&self, a: &SeqState, b: &SeqState) -> SeqState {
        SeqState {
            assigned: a.assigned.intersection(&b.assigned).copied().collect(),
            finish: a.finish.min(b.finish),
        }
    }

    // Makespan arcs telescope to the finish time, so an arc entering a merged
    // node gives up the finish time the merge took away.
    fn relax_arc_cost(&self, cost: &Rational, original: &SeqState, merged: &SeqState) -> Rational {
        match self.instance.objective {
            Objective::Tardiness => cost.clone(),
            Objective::Makespan => cost - int(original.finish - merged.finish),
        }
    }
}
