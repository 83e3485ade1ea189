//! Executable timing semantics: placement of a setup plus a resumable
//! operation on a machine calendar, semi-active decoding of an assignment
//! and machine sequences, and the full schedule checker.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::calendar::{Calendar, CalendarError};
use crate::instance::{Instance, MachineId, OpId, Time};
use crate::problem::{InvalidInstance, Problem};
use crate::report::Report;
use crate::schedule::{Schedule, ScheduledOp};

/// Input of [`earliest_start`].
#[derive(Debug, Clone, Copy)]
pub struct PlacementQuery<'c> {
    pub calendar: &'c Calendar,
    /// Earliest admissible operation start (not setup start).
    pub ready_time: Time,
    pub setup_len: Time,
    pub proc_len: Time,
    /// Units after which successors may start; `1 <= partial_len <= proc_len`.
    pub partial_len: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub setup_start: Time,
    pub start: Time,
    pub partial_completion: Time,
    pub completion: Time,
}

/// Completion of `dur` units started at `s`; see [`Calendar::completion_time`].
pub fn completion_time(calendar: &Calendar, s: Time, dur: Time) -> Result<Time, CalendarError> {
    calendar.completion_time(s, dur)
}

/// Smallest start `s >= max(ready_time, setup_len)` that is a legal start
/// and lets the whole setup run uninterrupted right before `s`.
pub fn earliest_start(q: &PlacementQuery<'_>) -> Placement {
    let cal = q.calendar;
    let mut s = q.ready_time.max(q.setup_len);
    loop {
        if let Some(w) = cal.blocking_start(s) {
            s = w.end;
            continue;
        }
        if let Some(w) = cal.blocking_setup(s, q.setup_len) {
            s = w.end + q.setup_len;
            continue;
        }
        break;
    }
    placement_at(cal, s, q.setup_len, q.proc_len, q.partial_len)
}

fn placement_at(cal: &Calendar, s: Time, setup: Time, proc: Time, partial: Time) -> Placement {
    Placement {
        setup_start: s - setup,
        start: s,
        partial_completion: cal.completion_from(s, partial),
        completion: cal.completion_from(s, proc),
    }
}

/// Earliest placement that also completes no earlier than `min_completion`.
pub fn earliest_start_with_completion(q: &PlacementQuery<'_>, min_completion: Time) -> Placement {
    let first = earliest_start(q);
    if first.completion >= min_completion {
        return first;
    }
    // Starts after `bound - 1` leave fewer than `proc_len` available units
    // before `min_completion`, hence complete at or after it.
    let bound = q
        .calendar
        .latest_start_covering(min_completion - 1, q.proc_len)
        .map_or(0, |t| t + 1);
    earliest_start(&PlacementQuery {
        ready_time: q.ready_time.max(bound),
        ..*q
    })
}

/// Machine assignment plus processing order per machine.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Decision {
    pub assignment: BTreeMap<OpId, MachineId>,
    pub sequences: BTreeMap<MachineId, Vec<OpId>>,
}

impl Decision {
    pub fn from_schedule(schedule: &Schedule) -> Self {
        Decision {
            assignment: schedule
                .operations
                .iter()
                .map(|op| (op.id, op.machine))
                .collect(),
            sequences: schedule.sequences.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error(transparent)]
    InvalidInstance(#[from] InvalidInstanceError),
    #[error("invalid decision: {0}")]
    InvalidDecision(String),
    #[error("deadlock between machine sequences and precedences; unplaced operations {remaining:?}")]
    Deadlock { remaining: Vec<OpId> },
    #[error("fixed operation {op} cannot start at its pinned time")]
    FixedConflict { op: OpId },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid instance ({violations} violation(s))")]
pub struct InvalidInstanceError {
    pub violations: usize,
}

impl From<InvalidInstance> for InvalidInstanceError {
    fn from(e: InvalidInstance) -> Self {
        InvalidInstanceError {
            violations: e.0.len(),
        }
    }
}

impl From<InvalidInstance> for DecodeError {
    fn from(e: InvalidInstance) -> Self {
        DecodeError::InvalidInstance(e.into())
    }
}

/// Timing of a placed operation, by dense indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub machine: usize,
    pub setup_len: Time,
    pub placement: Placement,
}

/// Incrementally built semi-active schedule. Operations are appended to the
/// end of machine sequences after all their predecessors are placed.
#[derive(Debug, Clone)]
pub struct Builder<'p> {
    problem: &'p Problem,
    slots: Vec<Option<Slot>>,
    last_on: Vec<Option<usize>>,
    sequences: Vec<Vec<usize>>,
    placed: usize,
}

impl<'p> Builder<'p> {
    pub fn new(problem: &'p Problem) -> Self {
        Builder {
            problem,
            slots: vec![None; problem.num_ops()],
            last_on: vec![None; problem.num_machines()],
            sequences: vec![Vec::new(); problem.num_machines()],
            placed: 0,
        }
    }

    pub fn problem(&self) -> &'p Problem {
        self.problem
    }

    pub fn slot(&self, i: usize) -> Option<&Slot> {
        self.slots[i].as_ref()
    }

    pub fn is_placed(&self, i: usize) -> bool {
        self.slots[i].is_some()
    }

    pub fn num_placed(&self) -> usize {
        self.placed
    }

    pub fn is_complete(&self) -> bool {
        self.placed == self.slots.len()
    }

    pub fn last_on(&self, k: usize) -> Option<usize> {
        self.last_on[k]
    }

    /// Completion of the last operation on machine `k`, 0 if idle.
    pub fn machine_free(&self, k: usize) -> Time {
        self.last_on[k]
            .and_then(|i| self.slots[i])
            .map_or(0, |s| s.placement.completion)
    }

    pub fn preds_placed(&self, j: usize) -> bool {
        self.problem.preds(j).iter().all(|&p| self.slots[p].is_some())
    }

    pub fn current_makespan(&self) -> Time {
        self.slots
            .iter()
            .flatten()
            .map(|s| s.placement.completion)
            .max()
            .unwrap_or(0)
    }

    /// Computes where `j` would go if appended to machine `k` now.
    /// All predecessors of `j` must already be placed.
    pub fn try_place(&self, j: usize, k: usize) -> Option<Slot> {
        let problem = self.problem;
        let op = problem.op(j);
        let option = op.option(k)?;
        let setup_len = problem.setup(k, self.last_on[k], j);
        let mut ready = op.release.max(self.machine_free(k) + setup_len);
        let mut target = 0;
        for &p in problem.preds(j) {
            let slot = self.slots[p].as_ref()?;
            ready = ready.max(slot.placement.partial_completion);
            target = target.max(slot.placement.completion);
        }
        let cal = &problem.machine(k).calendar;
        let placement = match op.fixed {
            Some((fk, start)) => {
                if fk != k
                    || start < ready
                    || !cal.is_legal_start(start)
                    || !cal.setup_fits(start, setup_len)
                {
                    return None;
                }
                let placement = placement_at(cal, start, setup_len, option.proc, option.partial);
                if placement.completion < target {
                    return None;
                }
                placement
            }
            None => earliest_start_with_completion(
                &PlacementQuery {
                    calendar: cal,
                    ready_time: ready,
                    setup_len,
                    proc_len: option.proc,
                    partial_len: option.partial,
                },
                target,
            ),
        };
        Some(Slot {
            machine: k,
            setup_len,
            placement,
        })
    }

    pub fn commit(&mut self, j: usize, slot: Slot) {
        debug_assert!(self.slots[j].is_none());
        self.slots[j] = Some(slot);
        self.last_on[slot.machine] = Some(j);
        self.sequences[slot.machine].push(j);
        self.placed += 1;
    }

    /// Removes `j`, which must be the last operation on its machine.
    pub fn undo(&mut self, j: usize) {
        let slot = self.slots[j].take().expect("undo of unplaced operation");
        let seq = &mut self.sequences[slot.machine];
        debug_assert_eq!(seq.last(), Some(&j));
        seq.pop();
        self.last_on[slot.machine] = seq.last().copied();
        self.placed -= 1;
    }

    pub fn to_schedule(&self) -> Schedule {
        let problem = self.problem;
        let operations = self
            .slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                s.map(|s| ScheduledOp {
                    id: problem.op(i).id,
                    machine: problem.machine(s.machine).id,
                    setup_start: s.placement.setup_start,
                    setup_len: s.setup_len,
                    start: s.placement.start,
                    partial_completion: s.placement.partial_completion,
                    completion: s.placement.completion,
                })
            })
            .collect();
        let sequences = self
            .sequences
            .iter()
            .enumerate()
            .map(|(k, seq)| {
                (
                    problem.machine(k).id,
                    seq.iter().map(|&i| problem.op(i).id).collect(),
                )
            })
            .collect();
        Schedule {
            operations,
            sequences,
        }
    }
}

/// Decodes a decision into its semi-active schedule.
pub fn decode(inst: &Instance, decision: &Decision) -> Result<Schedule, DecodeError> {
    let problem = Problem::new(inst)?;
    decode_problem(&problem, decision)
}

pub fn decode_problem(problem: &Problem, decision: &Decision) -> Result<Schedule, DecodeError> {
    let (assign, seqs) = dense_decision(problem, decision)?;
    let mut builder = Builder::new(problem);
    let mut heads = vec![0usize; problem.num_machines()];
    while !builder.is_complete() {
        // Lowest-id operation that heads its machine sequence with all
        // predecessors placed.
        let pick = seqs
            .iter()
            .enumerate()
            .filter_map(|(k, seq)| seq.get(heads[k]).map(|&j| (j, k)))
            .filter(|&(j, _)| builder.preds_placed(j))
            .min();
        let Some((j, k)) = pick else {
            let remaining = (0..problem.num_ops())
                .filter(|&i| !builder.is_placed(i))
                .map(|i| problem.op(i).id)
                .collect();
            return Err(DecodeError::Deadlock { remaining });
        };
        debug_assert_eq!(assign[j], k);
        let slot = builder
            .try_place(j, k)
            .ok_or(DecodeError::FixedConflict {
                op: problem.op(j).id,
            })?;
        builder.commit(j, slot);
        heads[k] += 1;
    }
    Ok(builder.to_schedule())
}

type DenseDecision = (Vec<usize>, Vec<Vec<usize>>);

fn dense_decision(problem: &Problem, decision: &Decision) -> Result<DenseDecision, DecodeError> {
    let bad = |msg: String| DecodeError::InvalidDecision(msg);
    let mut assign = vec![usize::MAX; problem.num_ops()];
    for (&id, &mid) in &decision.assignment {
        let i = problem
            .index_of(id)
            .ok_or_else(|| bad(format!("unknown operation {id}")))?;
        let k = problem
            .machine_index(mid)
            .ok_or_else(|| bad(format!("unknown machine {mid}")))?;
        if problem.op(i).option(k).is_none() {
            return Err(bad(format!("machine {mid} is not eligible for operation {id}")));
        }
        assign[i] = k;
    }
    if let Some(i) = assign.iter().position(|&k| k == usize::MAX) {
        return Err(bad(format!("operation {} is unassigned", problem.op(i).id)));
    }
    let mut seqs = vec![Vec::new(); problem.num_machines()];
    let mut seen = vec![false; problem.num_ops()];
    for (&mid, ids) in &decision.sequences {
        let k = problem
            .machine_index(mid)
            .ok_or_else(|| bad(format!("unknown machine {mid} in sequences")))?;
        for &id in ids {
            let i = problem
                .index_of(id)
                .ok_or_else(|| bad(format!("unknown operation {id} in sequences")))?;
            if assign[i] != k {
                return Err(bad(format!("operation {id} sequenced on machine {mid} but assigned elsewhere")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(bad(format!("operation {id} sequenced twice")));
            }
            seqs[k].push(i);
        }
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(bad(format!("operation {} missing from sequences", problem.op(i).id)));
    }
    Ok((assign, seqs))
}

/// Checks every problem rule on `schedule` and reports each violation.
pub fn check_schedule(inst: &Instance, schedule: &Schedule) -> Report {
    match Problem::new(inst) {
        Ok(problem) => check_schedule_problem(&problem, schedule),
        Err(InvalidInstance(report)) => report,
    }
}

pub fn check_schedule_problem(problem: &Problem, schedule: &Schedule) -> Report {
    let mut report = Report::new();
    let mut by_index: Vec<Option<&ScheduledOp>> = vec![None; problem.num_ops()];
    for sop in &schedule.operations {
        let Some(i) = problem.index_of(sop.id) else {
            report.push("unknown operation", vec![sop.id], format!("operation {} is not in the instance", sop.id));
            continue;
        };
        if by_index[i].is_some() {
            report.push("duplicate operation", vec![sop.id], format!("operation {} scheduled twice", sop.id));
            continue;
        }
        by_index[i] = Some(sop);
    }
    for (i, s) in by_index.iter().enumerate() {
        if s.is_none() {
            let id = problem.op(i).id;
            report.push("missing operation", vec![id], format!("operation {id} is not scheduled"));
        }
    }

    // Per operation rules.
    for sop in by_index.iter().flatten() {
        let id = sop.id;
        let op = problem.op(id as usize - 1);
        let Some(k) = problem.machine_index(sop.machine) else {
            report.push("unknown machine", vec![id], format!("operation {id} on unknown machine {}", sop.machine));
            continue;
        };
        let Some(option) = op.option(k) else {
            report.push("ineligible machine", vec![id], format!("operation {id} cannot run on machine {}", sop.machine));
            continue;
        };
        let cal = &problem.machine(k).calendar;
        if sop.start < op.release {
            report.push("release violated", vec![id], format!("operation {id} starts at {} before release {}", sop.start, op.release));
        }
        if let Some((fk, fs)) = op.fixed {
            if fk != k || fs != sop.start {
                report.push("fixed start violated", vec![id], format!("operation {id} is pinned to start {fs} on machine {}", problem.machine(fk).id));
            }
        }
        if sop.setup_start.checked_add(sop.setup_len) != Some(sop.start) {
            report.push("setup start mismatch", vec![id], format!("operation {id}: setup {}+{} != start {}", sop.setup_start, sop.setup_len, sop.start));
        }
        if let Some(w) = cal.blocking_start(sop.start) {
            report.push("start inside unavailability", vec![id], format!("operation {id} starts at {} within [{}, {}]", sop.start, w.begin, w.end));
        }
        if let Some(w) = cal.blocking_setup(sop.start, sop.setup_len) {
            report.push("setup inside unavailability", vec![id], format!("operation {id} setup [{}, {}] crosses [{}, {}]", sop.start.saturating_sub(sop.setup_len), sop.start, w.begin, w.end));
        }
        if !cal.is_legal_completion(sop.completion) {
            report.push("completion inside unavailability", vec![id], format!("operation {id} completes at {}", sop.completion));
        }
        let expected_c = cal.completion_from(sop.start, option.proc);
        if sop.completion != expected_c {
            report.push("completion mismatch", vec![id], format!("operation {id}: completion {} but start {} plus {} units of work ends at {expected_c}", sop.completion, sop.start, option.proc));
        }
        let expected_cb = cal.completion_from(sop.start, option.partial);
        if sop.partial_completion != expected_cb {
            report.push("partial completion mismatch", vec![id], format!("operation {id}: partial completion {} but expected {expected_cb}", sop.partial_completion));
        }
        if !(sop.start <= sop.partial_completion && sop.partial_completion <= sop.completion) {
            report.push("time order", vec![id], format!("operation {id}: need start <= partial completion <= completion"));
        }
    }

    // Precedence rules.
    for (j, sj) in by_index.iter().enumerate() {
        let Some(sj) = sj else { continue };
        for &i in problem.preds(j) {
            let Some(si) = by_index[i] else { continue };
            if si.partial_completion > sj.start {
                report.push("partial precedence violated", vec![si.id, sj.id], format!("operation {} starts at {} before {} reaches its overlap point {}", sj.id, sj.start, si.id, si.partial_completion));
            }
            if si.completion > sj.completion {
                report.push("end before end violated", vec![si.id, sj.id], format!("operation {} completes at {} before its predecessor {} at {}", sj.id, sj.completion, si.id, si.completion));
            }
        }
    }

    // Machine sequences.
    let mut sequenced: BTreeSet<OpId> = BTreeSet::new();
    for (&mid, ids) in &schedule.sequences {
        let Some(k) = problem.machine_index(mid) else {
            report.push("sequence mismatch", ids.clone(), format!("sequence for unknown machine {mid}"));
            continue;
        };
        let mut prev: Option<&ScheduledOp> = None;
        for &id in ids {
            let sop = problem.index_of(id).and_then(|i| by_index[i]);
            let Some(sop) = sop else {
                report.push("sequence mismatch", vec![id], format!("machine {mid} sequences unknown or unscheduled operation {id}"));
                prev = None;
                continue;
            };
            if !sequenced.insert(id) {
                report.push("sequence mismatch", vec![id], format!("operation {id} appears in more than one sequence position"));
            }
            if sop.machine != mid {
                report.push("sequence mismatch", vec![id], format!("operation {id} is assigned to machine {} but sequenced on {mid}", sop.machine));
            }
            let j = id as usize - 1;
            if problem.op(j).option(k).is_some() {
                let expected = problem.setup(k, prev.map(|p| p.id as usize - 1), j);
                if sop.setup_len != expected {
                    report.push("setup length mismatch", vec![id], format!("operation {id} on machine {mid}: setup {} but {expected} required after {:?}", sop.setup_len, prev.map(|p| p.id)));
                }
            }
            if let Some(p) = prev {
                if sop.setup_start < p.completion {
                    report.push("machine overlap", vec![p.id, id], format!("machine {mid}: setup of {id} starts at {} before {} completes at {}", sop.setup_start, p.id, p.completion));
                }
            }
            prev = Some(sop);
        }
    }
    for sop in by_index.iter().flatten() {
        if !sequenced.contains(&sop.id) {
            report.push("sequence mismatch", vec![sop.id], format!("operation {} is missing from the sequence of machine {}", sop.id, sop.machine));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::Window;

    fn cal(ws: &[(Time, Time)]) -> Calendar {
        Calendar::new(ws.iter().copied().map(Window::from).collect()).unwrap()
    }

    fn query(cal: &Calendar, ready: Time, setup: Time, proc: Time, partial: Time) -> Placement {
        earliest_start(&PlacementQuery {
            calendar: cal,
            ready_time: ready,
            setup_len: setup,
            proc_len: proc,
            partial_len: partial,
        })
    }

    #[test]
    fn ready_before_window_keeps_setup_ahead_of_it() {
        let c = cal(&[(10, 15)]);
        let p = query(&c, 8, 3, 4, 4);
        assert_eq!((p.setup_start, p.start, p.partial_completion, p.completion), (5, 8, 17, 17));
    }

    #[test]
    fn start_and_setup_skip_past_window() {
        let c = cal(&[(10, 15)]);
        let p = query(&c, 10, 3, 4, 4);
        assert_eq!((p.setup_start, p.start, p.completion), (15, 18, 22));
    }

    #[test]
    fn zero_setup_degenerate_case() {
        let c = Calendar::empty();
        let p = query(&c, 0, 0, 1, 1);
        assert_eq!((p.setup_start, p.start, p.partial_completion, p.completion), (0, 0, 1, 1));
    }

    #[test]
    fn setup_cannot_start_before_zero() {
        let c = Calendar::empty();
        let p = query(&c, 0, 4, 2, 2);
        assert_eq!((p.setup_start, p.start), (0, 4));
    }

    #[test]
    fn completion_floor_lifts_start_minimally() {
        let c = cal(&[(10, 15)]);
        let q = PlacementQuery {
            calendar: &c,
            ready_time: 0,
            setup_len: 0,
            proc_len: 2,
            partial_len: 2,
        };
        // plain earliest completes at 2; to reach 16 the start must be 9 (9..10, 15..16)
        let p = earliest_start_with_completion(&q, 16);
        assert_eq!((p.start, p.completion), (9, 16));
        let p = earliest_start_with_completion(&q, 17);
        assert_eq!((p.start, p.completion), (15, 17));
    }
}
