use crate::instance::Time;
use crate::problem::Problem;
use crate::timing::Builder;

/// Lower bound on the makespan of every completion of a partial schedule.
///
/// Maximum of the placed makespan, a precedence-propagated earliest
/// completion per operation, a per-machine bound over operations that have
/// no other machine, and the average load over all machines.
pub fn lower_bound(b: &Builder<'_>) -> Time {
    let p: &Problem = b.problem();
    let m = p.num_machines();
    let mut best = b.current_makespan();
    if b.is_complete() {
        return best;
    }
    let free: Vec<Time> = (0..m).map(|k| b.machine_free(k)).collect();

    let n = p.num_ops();
    let mut c_lb = vec![0; n];
    let mut cb_lb = vec![0; n];
    for &j in p.topo_order() {
        if let Some(slot) = b.slot(j) {
            c_lb[j] = slot.placement.completion;
            cb_lb[j] = slot.placement.partial_completion;
            continue;
        }
        let op = p.op(j);
        let mut ready = op.release;
        let mut floor = 0;
        for &q in p.preds(j) {
            ready = ready.max(cb_lb[q]);
            floor = floor.max(c_lb[q]);
        }
        let (mut c, mut cb) = (Time::MAX, Time::MAX);
        for opt in &op.options {
            let cal = &p.machine(opt.machine).calendar;
            let s = match op.fixed {
                Some((_, start)) => start,
                None => ready.max(free[opt.machine]),
            };
            c = c.min(cal.completion_from(s, opt.proc));
            cb = cb.min(cal.completion_from(s, opt.partial));
        }
        c_lb[j] = c.max(floor);
        cb_lb[j] = cb;
        best = best.max(c_lb[j]);
    }

    let mut only = vec![0; m];
    let mut total_min = 0;
    for j in (0..n).filter(|&j| !b.is_placed(j)) {
        let op = p.op(j);
        total_min += op.min_proc();
        if let [opt] = op.options.as_slice() {
            only[opt.machine] += opt.proc;
        }
    }
    for k in 0..m {
        if only[k] > 0 {
            best = best.max(p.machine(k).calendar.completion_from(free[k], only[k]));
        }
    }
    let load: Time = free.iter().sum::<Time>() + total_min;
    best.max(load.div_ceil(m as Time))
}
