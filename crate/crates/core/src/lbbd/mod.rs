//! Logic-based Benders decomposition for assigning jobs to facilities that
//! each run a cumulative schedule, minimizing the overall makespan.
//!
//! The master is a 0–1 program over assignment variables `x{i}_{j}` with
//! facility makespans `M{i}` and the overall makespan `M`. Subproblems
//! schedule each facility's jobs exactly and return cuts on `M{i}`.
//! Facilities and jobs are 0-based in the API and 1-based in variable names.

use thiserror::Error;

use crate::error::ParseError;

mod master;
mod subproblem;

pub use master::{
    benders_cut, build_master, relaxation_inequalities, solve_lbbd, BendersCut, CutKind, LbbdMode, LbbdResult,
    Master, TraceEntry,
};
pub use subproblem::{cumulative_propagate, solve_subproblem, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LbbdError {
    #[error("job {job} needs rate {rate} on facility {facility}, above its capacity {capacity}")]
    JobTooLarge { facility: usize, job: usize, rate: i64, capacity: i64 },
    #[error("job {0} does not exist")]
    UnknownJob(usize),
    #[error("facility {0} does not exist")]
    UnknownFacility(usize),
    #[error(transparent)]
    Lp(#[from] crate::lp::LpError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchedulingInstance {
    /// `processing[i][j]`
    pub processing: Vec<Vec<i64>>,
    pub release: Vec<i64>,
    /// `rate[i][j]`
    pub rate: Vec<Vec<i64>>,
    pub capacity: Vec<i64>,
}

impl SchedulingInstance {
    pub fn new(
        processing: Vec<Vec<i64>>,
        release: Vec<i64>,
        rate: Vec<Vec<i64>>,
        capacity: Vec<i64>,
    ) -> Result<Self, String> {
        let m = capacity.len();
        let n = release.len();
        if processing.len() != m || rate.len() != m {
            return Err(format!("expected {m} rows of processing times and rates"));
        }
        if processing.iter().chain(&rate).any(|row| row.len() != n) {
            return Err(format!("expected {n} entries per processing and rate row"));
        }
        if processing.iter().flatten().any(|&p| p < 1) {
            return Err("processing times must be at least 1".into());
        }
        if rate.iter().flatten().any(|&c| c < 1) {
            return Err("rates must be at least 1".into());
        }
        if release.iter().any(|&r| r < 0) {
            return Err("release times must be nonnegative".into());
        }
        if capacity.iter().any(|&c| c < 1) {
            return Err("capacities must be at least 1".into());
        }
        Ok(SchedulingInstance { processing, release, rate, capacity })
    }

    pub fn facility_count(&self) -> usize {
        self.capacity.len()
    }

    pub fn job_count(&self) -> usize {
        self.release.len()
    }

    /// Job `j` fits on facility `i`.
    pub fn allowed(&self, i: usize, j: usize) -> bool {
        self.rate[i][j] <= self.capacity[i]
    }

    pub fn to_text(&self) -> String {
        let row = |v: &[i64]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        let mut out = format!("{} {}\n", self.facility_count(), self.job_count());
        for p in &self.processing {
            out += &row(p);
            out.push('\n');
        }
        out += &row(&self.release);
        out.push('\n');
        for c in &self.rate {
            out += &row(c);
            out.push('\n');
        }
        out += &row(&self.capacity);
        out.push('\n');
        out
    }
}

/// Whitespace-separated integers: `m n`, the m×n processing matrix, n
/// release times, the m×n rate matrix and m capacities. `#` starts a
/// comment.
pub fn parse_scheduling(text: &str) -> Result<SchedulingInstance, ParseError> {
    let mut tokens = Vec::new();
    for (k, line) in text.lines().enumerate() {
        for tok in line.split('#').next().unwrap_or("").split_whitespace() {
            let value = tok
                .parse::<i64>()
                .map_err(|_| ParseError::new(k + 1, format!("bad integer {tok:?}")))?;
            tokens.push((k + 1, value));
        }
    }
    let last_line = text.lines().count().max(1);
    let mut pos = 0;
    let mut take = |count: usize, what: &str| -> Result<Vec<i64>, ParseError> {
        let slice = tokens
            .get(pos..pos + count)
            .ok_or_else(|| ParseError::new(last_line, format!("input ends before the {what}")))?;
        pos += count;
        Ok(slice.iter().map(|&(_, v)| v).collect())
    };
    let head = take(2, "facility and job counts")?;
    let (m, n) = match (usize::try_from(head[0]), usize::try_from(head[1])) {
        (Ok(m), Ok(n)) => (m, n),
        _ => return Err(ParseError::new(tokens[0].0, "counts must be nonnegative")),
    };
    let processing = (0..m).map(|_| take(n, "processing times")).collect::<Result<Vec<_>, _>>()?;
    let release = take(n, "release times")?;
    let rate = (0..m).map(|_| take(n, "rates")).collect::<Result<Vec<_>, _>>()?;
    let capacity = take(m, "capacities")?;
    if let Some(&(line, _)) = tokens.get(pos) {
        return Err(ParseError::new(line, "trailing numbers after the capacities"));
    }
    SchedulingInstance::new(processing, release, rate, capacity).map_err(|e| ParseError::new(last_line, e))
}

pub(crate) fn x_var(i: usize, j: usize) -> String {
    format!("x{}_{}", i + 1, j + 1)
}

pub(crate) fn m_var(i: usize) -> String {
    format!("M{}", i + 1)
}
