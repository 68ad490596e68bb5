use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Zero};

use super::{m_var, solve_subproblem, x_var, LbbdError, Schedule, SchedulingInstance};
use crate::lp::{milp_solve, milp_solve_lazy, Bounds, LinearConstraint, LpProblem, MilpStatus};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutKind {
    /// Bound that degrades by the processing time of each removed job and
    /// by the spread of release times.
    Degrading,
    /// All-or-nothing bound that reaches the subproblem optimum when the
    /// facility gets all of the generating jobs.
    NoGood,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BendersCut {
    pub facility: usize,
    pub iteration: usize,
    pub kind: CutKind,
    pub constraint: LinearConstraint,
}

impl BendersCut {
    /// Right-hand side of `M_i ≥ ...` when facility `facility` holds `jobs`.
    pub fn bound_at(&self, jobs: &BTreeSet<usize>) -> Rational {
        let m = m_var(self.facility);
        let mut bound = self.constraint.rhs().clone();
        for (var, a) in self.constraint.coefficients() {
            if *var == m {
                continue;
            }
            let j = var.rsplit('_').next().and_then(|s| s.parse::<usize>().ok()).expect("x variable") - 1;
            if jobs.contains(&j) {
                bound -= a;
            }
        }
        bound
    }
}

impl fmt::Display for BendersCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constraint)
    }
}

/// Cuts on `M_i` from facility `i` scheduled with `jobs` at optimum
/// `m_star`. An empty job set yields none.
pub fn benders_cut(inst: &SchedulingInstance, i: usize, jobs: &[usize], m_star: i64, iteration: usize) -> Vec<BendersCut> {
    if jobs.is_empty() {
        return Vec::new();
    }
    let m = m_var(i);
    let releases = jobs.iter().map(|&j| inst.release[j]);
    let spread = releases.clone().max().expect("nonempty") - releases.min().expect("nonempty");
    let total_p: i64 = jobs.iter().map(|&j| inst.processing[i][j]).sum();

    // M_i - Σ p_ij x_ij ≥ M* - Σ p_ij - spread
    let mut terms = vec![(m.clone(), Rational::one())];
    terms.extend(jobs.iter().map(|&j| (x_var(i, j), int(-inst.processing[i][j]))));
    let degrading = LinearConstraint::ge(terms, int(m_star - total_p - spread)).expect("named variables");

    // M_i - M* Σ x_ij ≥ M* (1 - |J|)
    let mut terms = vec![(m, Rational::one())];
    terms.extend(jobs.iter().map(|&j| (x_var(i, j), int(-m_star))));
    let no_good = LinearConstraint::ge(terms, int(m_star * (1 - jobs.len() as i64))).expect("named variables");

    vec![
        BendersCut { facility: i, iteration, kind: CutKind::Degrading, constraint: degrading },
        BendersCut { facility: i, iteration, kind: CutKind::NoGood, constraint: no_good },
    ]
}

/// For each facility and distinct release time `t`:
/// `M_i ≥ t + (1/C_i) Σ_{j : r_j ≥ t} p_ij c_ij x_ij`.
pub fn relaxation_inequalities(inst: &SchedulingInstance) -> Vec<LinearConstraint> {
    let thresholds: BTreeSet<i64> = inst.release.iter().copied().collect();
    let mut rows = Vec::new();
    for i in 0..inst.facility_count() {
        for &t in &thresholds {
            let mut terms = vec![(m_var(i), Rational::one())];
            for j in (0..inst.job_count()).filter(|&j| inst.release[j] >= t) {
                let energy = inst.processing[i][j] * inst.rate[i][j];
                terms.push((x_var(i, j), -Rational::new(energy.into(), inst.capacity[i].into())));
            }
            rows.push(LinearConstraint::ge(terms, int(t)).expect("named variables"));
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Master {
    pub problem: LpProblem,
    pub integral: BTreeSet<String>,
}

/// Minimize `M` subject to `M ≥ M_i`, one facility per job, the relaxation
/// rows and `cuts`. Jobs are barred from facilities they do not fit.
pub fn build_master(inst: &SchedulingInstance, cuts: &[BendersCut]) -> Master {
    let mut problem = LpProblem::minimize();
    problem.set_objective([("M", Rational::one())]).expect("named variable");
    let mut integral = BTreeSet::new();
    for i in 0..inst.facility_count() {
        problem.add_constraint(
            LinearConstraint::ge([("M".to_string(), Rational::one()), (m_var(i), -Rational::one())], Rational::zero())
                .expect("named variables"),
        );
        problem.set_bounds(m_var(i), Bounds::default());
    }
    for j in 0..inst.job_count() {
        let terms: Vec<(String, Rational)> = (0..inst.facility_count()).map(|i| (x_var(i, j), Rational::one())).collect();
        problem.add_constraint(LinearConstraint::eq(terms, Rational::one()).expect("named variables"));
        for i in 0..inst.facility_count() {
            let upper = if inst.allowed(i, j) { Rational::one() } else { Rational::zero() };
            problem.set_bounds(x_var(i, j), Bounds::new(Some(Rational::zero()), Some(upper)));
            integral.insert(x_var(i, j));
        }
    }
    for row in relaxation_inequalities(inst) {
        problem.add_constraint(row);
    }
    for cut in cuts {
        problem.add_constraint(cut.constraint.clone());
    }
    Master { problem, integral }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbbdMode {
    /// Solve the master to optimality, add cuts, repeat.
    Iterative,
    /// One master search that adds cuts at every integral incumbent.
    BranchAndCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub iteration: usize,
    /// Master value (iterative) or candidate incumbent value (branch and check).
    pub lower_bound: Rational,
    /// Best makespan found so far.
    pub upper_bound: Option<i64>,
    pub cuts_added: usize,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ub = self.upper_bound.map_or_else(|| "inf".to_string(), |u| u.to_string());
        write!(f, "iter {} z {} ub {} cuts {}", self.iteration, self.lower_bound, ub, self.cuts_added)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LbbdResult {
    /// Optimal makespan; `None` if some job fits no facility.
    pub makespan: Option<i64>,
    /// Facility of each job.
    pub assignment: Vec<usize>,
    pub schedules: Vec<Schedule>,
    pub trace: Vec<TraceEntry>,
    pub cuts: Vec<BendersCut>,
}

fn assignment_from(inst: &SchedulingInstance, values: &BTreeMap<String, Rational>) -> Vec<usize> {
    (0..inst.job_count())
        .map(|j| {
            (0..inst.facility_count())
                .find(|&i| values.get(&x_var(i, j)).is_some_and(One::is_one))
                .expect("each job on one facility")
        })
        .collect()
}

fn facility_jobs(inst: &SchedulingInstance, assignment: &[usize]) -> Vec<Vec<usize>> {
    let mut jobs = vec![Vec::new(); inst.facility_count()];
    for (j, &i) in assignment.iter().enumerate() {
        jobs[i].push(j);
    }
    jobs
}

fn schedules_for(inst: &SchedulingInstance, assignment: &[usize]) -> Result<Vec<Schedule>, LbbdError> {
    facility_jobs(inst, assignment)
        .iter()
        .enumerate()
        .map(|(i, jobs)| solve_subproblem(inst, i, jobs))
        .collect()
}

fn infeasible(trace: Vec<TraceEntry>, cuts: Vec<BendersCut>) -> LbbdResult {
    LbbdResult { makespan: None, assignment: Vec::new(), schedules: Vec::new(), trace, cuts }
}

/// Exact minimum makespan by logic-based Benders decomposition.
pub fn solve_lbbd(inst: &SchedulingInstance, mode: LbbdMode) -> Result<LbbdResult, LbbdError> {
    match mode {
        LbbdMode::Iterative => iterative(inst),
        LbbdMode::BranchAndCheck => branch_and_check(inst),
    }
}

fn iterative(inst: &SchedulingInstance) -> Result<LbbdResult, LbbdError> {
    let mut cuts: Vec<BendersCut> = Vec::new();
    let mut trace = Vec::new();
    let mut best: Option<(i64, Vec<usize>, Vec<Schedule>)> = None;
    for iteration in 0.. {
        let master = build_master(inst, &cuts);
        let solved = milp_solve(&master.problem, &master.integral)?;
        if solved.status == MilpStatus::Infeasible {
            trace.push(TraceEntry { iteration, lower_bound: Rational::zero(), upper_bound: None, cuts_added: 0 });
            return Ok(infeasible(trace, cuts));
        }
        let z = solved.value.expect("optimal master");
        let assignment = assignment_from(inst, &solved.values);
        let schedules = schedules_for(inst, &assignment)?;
        let makespan = schedules.iter().map(|s| s.makespan).max().unwrap_or(0);
        if best.as_ref().is_none_or(|(b, _, _)| makespan < *b) {
            best = Some((makespan, assignment.clone(), schedules.clone()));
        }
        let upper = best.as_ref().map(|(b, ..)| *b).expect("set above");
        if z >= int(upper) {
            trace.push(TraceEntry { iteration, lower_bound: z, upper_bound: Some(upper), cuts_added: 0 });
            break;
        }
        let before = cuts.len();
        for (i, jobs) in facility_jobs(inst, &assignment).iter().enumerate() {
            cuts.extend(benders_cut(inst, i, jobs, schedules[i].makespan, iteration));
        }
        trace.push(TraceEntry { iteration, lower_bound: z, upper_bound: Some(upper), cuts_added: cuts.len() - before });
    }
    let (makespan, assignment, schedules) = best.expect("loop ends with an incumbent");
    Ok(LbbdResult { makespan: Some(makespan), assignment, schedules, trace, cuts })
}

fn branch_and_check(inst: &SchedulingInstance) -> Result<LbbdResult, LbbdError> {
    let master = build_master(inst, &[]);
    let mut cuts: Vec<BendersCut> = Vec::new();
    let mut trace = Vec::new();
    let mut best: Option<i64> = None;
    let mut failure = None;
    let solved = milp_solve_lazy(&master.problem, &master.integral, |values| {
        let iteration = trace.len();
        let assignment = assignment_from(inst, values);
        let schedules = match schedules_for(inst, &assignment) {
            Ok(s) => s,
            Err(e) => {
                failure.get_or_insert(e);
                return Vec::new();
            }
        };
        let makespan = schedules.iter().map(|s| s.makespan).max().unwrap_or(0);
        best = Some(best.map_or(makespan, |b| b.min(makespan)));
        let z = values["M"].clone();
        let mut added = Vec::new();
        if z < int(makespan) {
            for (i, jobs) in facility_jobs(inst, &assignment).iter().enumerate() {
                if values[&m_var(i)] < int(schedules[i].makespan) {
                    added.extend(benders_cut(inst, i, jobs, schedules[i].makespan, iteration));
                }
            }
        }
        trace.push(TraceEntry { iteration, lower_bound: z, upper_bound: best, cuts_added: added.len() });
        let rows = added.iter().map(|c| c.constraint.clone()).collect();
        cuts.extend(added);
        rows
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if solved.status == MilpStatus::Infeasible {
        return Ok(infeasible(trace, cuts));
    }
    let assignment = assignment_from(inst, &solved.values);
    let schedules = schedules_for(inst, &assignment)?;
    let makespan = schedules.iter().map(|s| s.makespan).max().unwrap_or(0);
    Ok(LbbdResult { makespan: Some(makespan), assignment, schedules, trace, cuts })
}
