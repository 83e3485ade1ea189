use std::time::{Duration, Instant};

use crate::instance::{Instance, Time};
use crate::milp::EPS_ABS;
use crate::problem::{InvalidInstance, Problem};
use crate::schedule::Schedule;
use crate::timing::{Builder, Slot};

use super::bound::lower_bound;
use super::greedy::greedy_problem;
use super::{relative_gap, Progress, SolveResult, Status};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExactOptions {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
}

struct Frame {
    /// Operation whose placement created this node; `None` at the root.
    placed: Option<usize>,
    lb: Time,
    children: Vec<(usize, Slot)>,
    next: usize,
}

/// True when appending `j` still allows every unplaced fixed operation on
/// the same machine to start at its pinned time.
fn fixed_still_reachable(b: &Builder<'_>, j: usize, slot: &Slot) -> bool {
    let p = b.problem();
    let k = slot.machine;
    p.fixed_on(k).iter().all(|&f| {
        if f == j || b.is_placed(f) {
            return true;
        }
        let (_, start) = p.op(f).fixed.expect("fixed_on lists fixed operations");
        start >= slot.placement.completion + p.setup(k, Some(j), f).min(1)
    })
}

/// Children of the current node: every ready operation appended to every
/// eligible machine, sorted by completion. Two consecutive appends on
/// different machines without an arc between them commute, so only the
/// order with the smaller operation id first is kept.
fn children(b: &Builder<'_>, last: Option<usize>) -> Vec<(usize, Slot)> {
    let p = b.problem();
    let last_machine = last.and_then(|i| b.slot(i)).map(|s| s.machine);
    let mut out = Vec::new();
    for j in 0..p.num_ops() {
        if b.is_placed(j) || !b.preds_placed(j) {
            continue;
        }
        for opt in &p.op(j).options {
            let k = opt.machine;
            if let (Some(i), Some(lk)) = (last, last_machine) {
                if lk != k && j < i && !p.has_arc(i, j) {
                    continue;
                }
            }
            if let Some(slot) = b.try_place(j, k) {
                if fixed_still_reachable(b, j, &slot) {
                    out.push((j, slot));
                }
            }
        }
    }
    out.sort_by_key(|(j, s)| (s.placement.completion, *j, s.machine));
    out
}

/// Branch and bound over append-only partial schedules, seeded with the
/// greedy schedule. A node is pruned once its bound is within `EPS_ABS` of
/// the incumbent.
pub fn solve_exact(inst: &Instance, opts: &ExactOptions) -> Result<SolveResult, InvalidInstance> {
    let t0 = Instant::now();
    let problem = Problem::new(inst)?;
    let mut builder = Builder::new(&problem);

    let mut incumbent: Option<Schedule> = greedy_problem(&problem).ok();
    let mut best: Option<Time> = incumbent.as_ref().map(crate::schedule::makespan);
    let root_lb = lower_bound(&builder);
    let mut progress = vec![Progress {
        nodes: 0,
        incumbent: best,
        lower_bound: root_lb,
    }];
    let closes = |lb: Time, ub: Option<Time>| ub.is_some_and(|ub| ub as f64 - lb as f64 <= EPS_ABS);

    let finish = |status: Status, lb: Time, nodes: u64, incumbent: Option<Schedule>, mut progress: Vec<Progress>| {
        let ms = incumbent.as_ref().map(crate::schedule::makespan);
        let lb = match status {
            Status::Optimal => ms.unwrap_or(lb),
            _ => lb,
        };
        progress.push(Progress {
            nodes,
            incumbent: ms,
            lower_bound: lb,
        });
        SolveResult {
            status,
            makespan: ms,
            lower_bound: lb,
            gap: ms.map(|ub| relative_gap(ub, lb)),
            nodes,
            wall_ms: t0.elapsed().as_millis() as u64,
            schedule: incumbent,
            progress,
        }
    };

    if opts.time_limit == Some(Duration::ZERO) {
        return Ok(finish(Status::Limit, root_lb, 0, incumbent, progress));
    }
    if closes(root_lb, best) {
        return Ok(finish(Status::Optimal, root_lb, 0, incumbent, progress));
    }

    let mut stack = vec![Frame {
        placed: None,
        lb: root_lb,
        children: children(&builder, None),
        next: 0,
    }];
    let mut nodes = 0u64;
    let mut reported_lb = root_lb;

    while let Some(top) = stack.last_mut() {
        let out_of_nodes = opts.node_limit.is_some_and(|n| nodes >= n);
        let out_of_time = opts.time_limit.is_some_and(|t| t0.elapsed() >= t);
        if out_of_nodes || out_of_time {
            // Better solutions can only lie below frames with unexplored children.
            let open = stack
                .iter()
                .filter(|f| f.next < f.children.len())
                .map(|f| f.lb)
                .min();
            let bound = match (open, best) {
                (Some(o), Some(b)) => o.min(b),
                (Some(o), None) => o,
                (None, Some(b)) => b,
                (None, None) => reported_lb,
            };
            reported_lb = reported_lb.max(bound);
            let status = if closes(reported_lb, best) { Status::Optimal } else { Status::Limit };
            return Ok(finish(status, reported_lb, nodes, incumbent, progress));
        }

        if top.next >= top.children.len() {
            let frame = stack.pop().expect("non-empty stack");
            if let Some(j) = frame.placed {
                builder.undo(j);
            }
            continue;
        }
        let (j, slot) = top.children[top.next];
        top.next += 1;
        nodes += 1;
        builder.commit(j, slot);

        if builder.is_complete() {
            let ms = builder.current_makespan();
            if best.is_none_or(|b| ms < b) {
                best = Some(ms);
                incumbent = Some(builder.to_schedule());
                progress.push(Progress {
                    nodes,
                    incumbent: best,
                    lower_bound: reported_lb,
                });
                if closes(root_lb, best) {
                    builder.undo(j);
                    return Ok(finish(Status::Optimal, root_lb, nodes, incumbent, progress));
                }
            }
            builder.undo(j);
            continue;
        }
        let lb = lower_bound(&builder);
        if closes(lb, best) {
            builder.undo(j);
            continue;
        }
        let kids = children(&builder, Some(j));
        stack.push(Frame {
            placed: Some(j),
            lb,
            children: kids,
            next: 0,
        });
    }

    let status = if incumbent.is_some() { Status::Optimal } else { Status::Infeasible };
    Ok(finish(status, root_lb, nodes, incumbent, progress))
}
