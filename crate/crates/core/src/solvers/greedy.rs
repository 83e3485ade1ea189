use std::time::Instant;

use crate::instance::{Instance, Time};
use crate::problem::Problem;
use crate::schedule::{makespan, Schedule};
use crate::timing::{Builder, Slot};

use super::{SolveError, SolveResult, Status};

/// List scheduling: repeatedly appends the ready (operation, machine) pair
/// with the smallest completion; ties by operation id, then machine id.
pub fn solve_greedy(inst: &Instance) -> Result<Schedule, SolveError> {
    let problem = Problem::new(inst)?;
    greedy_problem(&problem)
}

/// [`solve_greedy`] wrapped as a solver result.
pub fn greedy_result(inst: &Instance) -> Result<SolveResult, SolveError> {
    let t0 = Instant::now();
    let schedule = solve_greedy(inst)?;
    let ms = makespan(&schedule);
    Ok(SolveResult {
        status: Status::Feasible,
        makespan: Some(ms),
        lower_bound: 0,
        gap: None,
        nodes: 0,
        wall_ms: t0.elapsed().as_millis() as u64,
        schedule: Some(schedule),
        progress: Vec::new(),
    })
}

/// True when fixed operations still to come on `slot.machine` can follow `j`
/// with their setup right after it.
pub(crate) fn leaves_room_for_fixed(b: &Builder<'_>, j: usize, slot: &Slot) -> bool {
    let p = b.problem();
    let k = slot.machine;
    let cal = &p.machine(k).calendar;
    p.fixed_on(k).iter().all(|&f| {
        if f == j || b.is_placed(f) {
            return true;
        }
        let (_, start) = p.op(f).fixed.expect("fixed_on lists fixed operations");
        let setup = p.setup(k, Some(j), f);
        start >= slot.placement.completion + setup && cal.setup_fits(start, setup)
    })
}

pub(crate) fn greedy_problem(problem: &Problem) -> Result<Schedule, SolveError> {
    let n = problem.num_ops();
    let mut b = Builder::new(problem);
    // Candidate slot per (operation, option), valid until its machine changes.
    let mut cache: Vec<Vec<Option<Option<Slot>>>> = (0..n)
        .map(|j| vec![None; problem.op(j).options.len()])
        .collect();
    let mut missing_preds: Vec<usize> = (0..n).map(|j| problem.preds(j).len()).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&j| missing_preds[j] == 0).collect();

    while !b.is_complete() {
        let mut best: Option<(Time, usize, usize, Slot)> = None;
        for &j in &ready {
            for (oi, opt) in problem.op(j).options.iter().enumerate() {
                let entry = cache[j][oi].get_or_insert_with(|| {
                    b.try_place(j, opt.machine)
                        .filter(|slot| leaves_room_for_fixed(&b, j, slot))
                });
                let Some(slot) = *entry else { continue };
                let key = (slot.placement.completion, j, opt.machine);
                if best.is_none_or(|(c, bj, bk, _)| key < (c, bj, bk)) {
                    best = Some((key.0, j, opt.machine, slot));
                }
            }
        }
        let Some((_, j, k, slot)) = best else {
            let unplaced = (0..n)
                .filter(|&i| !b.is_placed(i))
                .map(|i| problem.op(i).id)
                .collect();
            return Err(SolveError::Stuck { unplaced });
        };
        b.commit(j, slot);
        ready.retain(|&r| r != j);
        for &i in &problem.machine(k).eligible {
            if let Some(oi) = problem.op(i).options.iter().position(|o| o.machine == k) {
                cache[i][oi] = None;
            }
        }
        for &s in problem.succs(j) {
            missing_preds[s] -= 1;
            if missing_preds[s] == 0 {
                ready.push(s);
            }
        }
    }
    Ok(b.to_schedule())
}
