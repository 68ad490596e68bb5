use std::collections::BTreeMap;

use super::{LbbdError, SchedulingInstance};

/// Start times of the jobs on one facility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub facility: usize,
    pub starts: BTreeMap<usize, i64>,
    /// Latest finish; 0 for an empty facility.
    pub makespan: i64,
}

/// Timetable filtering for one cumulative resource.
///
/// `windows[j]` is `[est, lst]` for the start of job `j`. The profile of
/// compulsory parts `[lst, est + p)` is built and each job's earliest start
/// is pushed past any slot where it would overflow `capacity`, to a
/// fixpoint. Returns `None` when the profile alone overflows or a window
/// empties.
pub fn cumulative_propagate(windows: &[(i64, i64)], p: &[i64], c: &[i64], capacity: i64) -> Option<Vec<(i64, i64)>> {
    let mut w = windows.to_vec();
    if w.iter().any(|&(est, lst)| est > lst) {
        return None;
    }
    if w.is_empty() {
        return Some(w);
    }
    let origin = w.iter().map(|&(est, _)| est).min().expect("nonempty");
    let end = w.iter().zip(p).map(|(&(_, lst), &pj)| lst + pj).max().expect("nonempty");
    let len = (end - origin) as usize;
    loop {
        let mut profile = vec![0i64; len];
        for (j, &(est, lst)) in w.iter().enumerate() {
            for t in lst..est + p[j] {
                profile[(t - origin) as usize] += c[j];
            }
        }
        if profile.iter().any(|&u| u > capacity) {
            return None;
        }
        let mut changed = false;
        for j in 0..w.len() {
            let (est, lst) = w[j];
            let own = |t: i64| if t >= lst && t < est + p[j] { c[j] } else { 0 };
            let mut t = est;
            'search: while t <= lst {
                for tau in (t..t + p[j]).rev() {
                    if profile[(tau - origin) as usize] - own(tau) + c[j] > capacity {
                        t = tau + 1;
                        continue 'search;
                    }
                }
                break;
            }
            if t > lst {
                return None;
            }
            if t != est {
                w[j].0 = t;
                changed = true;
            }
        }
        if !changed {
            return Some(w);
        }
    }
}

struct Search<'a> {
    p: &'a [i64],
    c: &'a [i64],
    capacity: i64,
    best: Option<(i64, Vec<i64>)>,
}

impl Search<'_> {
    fn run(&mut self, mut windows: Vec<(i64, i64)>) {
        if let Some((best, _)) = &self.best {
            for (j, w) in windows.iter_mut().enumerate() {
                w.1 = w.1.min(best - 1 - self.p[j]);
            }
        }
        let Some(windows) = cumulative_propagate(&windows, self.p, self.c, self.capacity) else { return };
        let finish_bound = windows.iter().zip(self.p).map(|(&(est, _), &p)| est + p).max().unwrap_or(0);
        let open: Vec<usize> = (0..windows.len()).filter(|&j| windows[j].0 < windows[j].1).collect();
        let energy_bound = open.iter().map(|&j| windows[j].0).min().map_or(0, |first| {
            let energy: i64 = open.iter().map(|&j| self.p[j] * self.c[j]).sum();
            first + (energy + self.capacity - 1) / self.capacity
        });
        let bound = finish_bound.max(energy_bound);
        if self.best.as_ref().is_some_and(|(best, _)| bound >= *best) {
            return;
        }
        let Some(&j) = open.iter().min_by_key(|&&j| (windows[j].0, j)) else {
            let starts = windows.iter().map(|&(est, _)| est).collect();
            self.best = Some((finish_bound, starts));
            return;
        };
        let (est, lst) = windows[j];
        for s in est..=lst {
            if self.best.as_ref().is_some_and(|(best, _)| s + self.p[j] >= *best) {
                break;
            }
            let mut child = windows.clone();
            child[j] = (s, s);
            self.run(child);
        }
    }
}

/// Minimum-makespan schedule of `jobs` on facility `i` under release times
/// and the facility's capacity.
///
/// Chronological branch-and-bound: the open job with the earliest start is
/// fixed to each start in its window in turn, with timetable filtering at
/// every node.
pub fn solve_subproblem(inst: &SchedulingInstance, i: usize, jobs: &[usize]) -> Result<Schedule, LbbdError> {
    if i >= inst.facility_count() {
        return Err(LbbdError::UnknownFacility(i));
    }
    if let Some(&j) = jobs.iter().find(|&&j| j >= inst.job_count()) {
        return Err(LbbdError::UnknownJob(j));
    }
    if let Some(&j) = jobs.iter().find(|&&j| !inst.allowed(i, j)) {
        return Err(LbbdError::JobTooLarge { facility: i, job: j, rate: inst.rate[i][j], capacity: inst.capacity[i] });
    }
    if jobs.is_empty() {
        return Ok(Schedule { facility: i, starts: BTreeMap::new(), makespan: 0 });
    }
    let p: Vec<i64> = jobs.iter().map(|&j| inst.processing[i][j]).collect();
    let c: Vec<i64> = jobs.iter().map(|&j| inst.rate[i][j]).collect();
    let r: Vec<i64> = jobs.iter().map(|&j| inst.release[j]).collect();
    let horizon = r.iter().max().expect("nonempty") + p.iter().sum::<i64>();
    let windows = r.iter().zip(&p).map(|(&rj, &pj)| (rj, horizon - pj)).collect();
    let mut search = Search { p: &p, c: &c, capacity: inst.capacity[i], best: None };
    search.run(windows);
    let (makespan, starts) = search.best.expect("running the jobs one after another is feasible");
    Ok(Schedule { facility: i, starts: jobs.iter().copied().zip(starts).collect(), makespan })
}
