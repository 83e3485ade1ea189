//! Big-M constants for the MILP model.

use serde::{Deserialize, Serialize};

use crate::instance::{Instance, Time};

/// Family-specific big-M values.
///
/// * `m1` bounds every setup time (setup linking rows).
/// * `m2` bounds the makespan (sequencing rows and the `<=` window rows).
/// * `m3` is the latest window end (the `>=` window rows).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigM {
    pub m1: Time,
    pub m2: Time,
    pub m3: Time,
}

/// Computes `M1`, `M2` and `M3` for a valid instance.
///
/// `M2` starts from the latest instant after which nothing can delay an
/// operation any more: the last window end, the largest release time and
/// the largest fixed start. Without releases or fixed starts beyond the last
/// window this is exactly the last window end.
pub fn big_m_constants(inst: &Instance) -> BigM {
    let m3 = inst
        .machines
        .iter()
        .map(|m| m.calendar.horizon())
        .max()
        .unwrap_or(0);

    let mut m1 = 0;
    for mach in &inst.machines {
        let eligible = inst.eligible_ops(mach.id);
        for &j in &eligible {
            m1 = m1.max(inst.setup_first(mach.id, j).unwrap_or(0));
            for &i in &eligible {
                if i != j {
                    m1 = m1.max(inst.setup_between(mach.id, i, j).unwrap_or(0));
                }
            }
        }
    }

    let latest_release = inst.operations.iter().map(|o| o.release).max().unwrap_or(0);
    let latest_fixed = inst
        .operations
        .iter()
        .filter_map(|o| o.fixed.map(|f| f.start))
        .max()
        .unwrap_or(0);
    let base = m3.max(latest_release).max(latest_fixed);

    let mut sum: Time = 0;
    for op in &inst.operations {
        let worst = op
            .eligible
            .iter()
            .map(|(&k, &p)| {
                let first = inst.setup_first(k, op.id).unwrap_or(0);
                let between = inst
                    .eligible_ops(k)
                    .into_iter()
                    .filter(|&i| i != op.id)
                    .filter_map(|i| inst.setup_between(k, i, op.id))
                    .max()
                    .unwrap_or(0);
                p + first.max(between)
            })
            .max()
            .unwrap_or(0);
        sum += worst;
    }

    BigM {
        m1,
        m2: base + sum,
        m3,
    }
}
