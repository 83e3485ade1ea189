use std::collections::BTreeMap;
use std::time::Instant;

use itertools::Itertools;

use crate::instance::{Instance, MachineId, OpId};
use crate::problem::{InvalidInstance, Problem};
use crate::schedule::{makespan, Schedule};
use crate::timing::{decode_problem, Decision};

use super::{SolveResult, Status};

/// Decodes every assignment and every order on every machine and keeps the
/// first strict minimum. Assignments are enumerated lexicographically by
/// operation id and machine id, then machine orders lexicographically.
/// Intended for instances with at most about eight operations.
pub fn brute_force(inst: &Instance) -> Result<SolveResult, InvalidInstance> {
    let t0 = Instant::now();
    let problem = Problem::new(inst)?;
    let choices: Vec<Vec<MachineId>> = problem
        .ops()
        .iter()
        .map(|op| op.options.iter().map(|o| problem.machine(o.machine).id).collect())
        .collect();

    let mut best: Option<Schedule> = None;
    let mut tried = 0u64;
    for assignment in choices.iter().multi_cartesian_product() {
        let mut on: BTreeMap<MachineId, Vec<OpId>> = BTreeMap::new();
        for (i, &&k) in assignment.iter().enumerate() {
            on.entry(k).or_default().push(problem.op(i).id);
        }
        let assign: BTreeMap<OpId, MachineId> = assignment
            .iter()
            .enumerate()
            .map(|(i, &&k)| (problem.op(i).id, k))
            .collect();
        let machines: Vec<MachineId> = on.keys().copied().collect();
        let orders = on
            .values()
            .map(|ops| ops.iter().copied().permutations(ops.len()).collect::<Vec<_>>())
            .multi_cartesian_product();
        for order in orders {
            tried += 1;
            let decision = Decision {
                assignment: assign.clone(),
                sequences: machines.iter().copied().zip(order).collect(),
            };
            let Ok(schedule) = decode_problem(&problem, &decision) else {
                continue;
            };
            if best.as_ref().is_none_or(|b| makespan(&schedule) < makespan(b)) {
                best = Some(schedule);
            }
        }
    }

    let ms = best.as_ref().map(makespan);
    Ok(SolveResult {
        status: if best.is_some() { Status::Optimal } else { Status::Infeasible },
        makespan: ms,
        lower_bound: ms.unwrap_or(0),
        gap: ms.map(|_| 0.0),
        nodes: tried,
        wall_ms: t0.elapsed().as_millis() as u64,
        schedule: best,
        progress: Vec::new(),
    })
}
