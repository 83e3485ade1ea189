//! Solvers over the decision structure (machine assignment plus machine
//! sequences), all built on the semi-active placement of [`crate::timing`].

mod bound;
mod brute;
mod exact;
mod greedy;

use serde::{Deserialize, Serialize};

use crate::instance::Time;
use crate::problem::InvalidInstance;
use crate::schedule::Schedule;

pub use bound::lower_bound;
pub use brute::brute_force;
pub use exact::{solve_exact, ExactOptions};
pub use greedy::{greedy_result, solve_greedy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Proven optimal.
    Optimal,
    /// Feasible without an optimality proof.
    Feasible,
    /// Proven to have no feasible schedule.
    Infeasible,
    /// Stopped by a time or node limit.
    Limit,
}

/// Snapshot taken whenever the incumbent or the bound changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub nodes: u64,
    pub incumbent: Option<Time>,
    pub lower_bound: Time,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: Status,
    pub makespan: Option<Time>,
    pub lower_bound: Time,
    pub gap: Option<f64>,
    pub nodes: u64,
    pub wall_ms: u64,
    pub schedule: Option<Schedule>,
    #[serde(skip)]
    pub progress: Vec<Progress>,
}

impl SolveResult {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization is infallible")
    }
}

/// `|ub - lb| / (1e-10 + |ub|)`.
pub fn relative_gap(ub: Time, lb: Time) -> f64 {
    (ub as f64 - lb as f64).abs() / (1e-10 + ub as f64)
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    InvalidInstance(#[from] InvalidInstance),
    #[error("no operation can be placed; unplaced operations {unplaced:?}")]
    Stuck { unplaced: Vec<u32> },
}
