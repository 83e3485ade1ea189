use serde::{Deserialize, Serialize};

use crate::bigm::BigM;
use crate::instance::{Instance, Time};
use crate::problem::{InvalidInstance, Problem};
use crate::schedule::Schedule;

use super::build::build_with_table;
use super::{MilpModel, VarKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowViolation {
    pub row: String,
    pub lhs: i128,
    pub sense: String,
    pub rhs: i128,
}

/// A schedule mapped onto model variables, with every violated row.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub model: MilpModel,
    /// By variable index.
    pub values: Vec<i128>,
    pub violations: Vec<RowViolation>,
}

impl Evaluation {
    pub fn value(&self, name: &str) -> Option<i128> {
        self.model.var(name).map(|v| self.values[v])
    }

    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Derives every model variable from `sched` and checks all rows, variable
/// domains and bounds. Operations missing from the schedule keep all their
/// variables at zero.
pub fn evaluate_schedule(inst: &Instance, sched: &Schedule, bigm: &BigM) -> Result<Evaluation, InvalidInstance> {
    let problem = Problem::new(inst)?;
    let (model, vt) = build_with_table(&problem, bigm);
    let mut val = vec![0i128; model.variables.len()];
    let o = problem.num_ops();
    let tv = |t: Time| t as i128;

    // Assigned machine index per operation, if eligible.
    let mut assigned: Vec<Option<usize>> = vec![None; o];
    for sop in &sched.operations {
        let (Some(i), Some(k)) = (problem.index_of(sop.id), problem.machine_index(sop.machine)) else {
            continue;
        };
        if problem.op(i).option(k).is_some() {
            assigned[i] = Some(k);
        }
    }
    for (i, k) in assigned.iter().enumerate() {
        if let Some(k) = *k {
            val[vt.x[&(i, k)]] = 1;
        }
    }
    for (&mid, ids) in &sched.sequences {
        let Some(k) = problem.machine_index(mid) else { continue };
        for pair in ids.windows(2) {
            let (Some(a), Some(b)) = (problem.index_of(pair[0]), problem.index_of(pair[1])) else {
                continue;
            };
            if assigned[a] == Some(k) && assigned[b] == Some(k) {
                if let Some(&y) = vt.y.get(&(a, b, k)) {
                    val[y] = 1;
                }
            }
        }
    }

    let mut cmax = 0;
    for sop in &sched.operations {
        let Some(i) = problem.index_of(sop.id) else { continue };
        val[vt.s[i]] = tv(sop.start);
        val[vt.c[i]] = tv(sop.completion);
        val[vt.cb[i]] = tv(sop.partial_completion);
        val[vt.xi[i]] = tv(sop.setup_len);
        cmax = cmax.max(tv(sop.completion));
        let Some(k) = assigned[i] else { continue };
        let opt = problem.op(i).option(k).expect("assigned machine is eligible");
        val[vt.pp[i]] = tv(opt.proc);
        val[vt.ppb[i]] = tv(opt.partial);
        let (mut u, mut ub) = (0i128, 0i128);
        for (l, win) in problem.machine(k).calendar.windows().iter().enumerate() {
            let left_of_s = (win.end <= sop.start) as i128;
            let left_of_c = (win.end < sop.completion) as i128;
            let left_of_cb = (win.end < sop.partial_completion) as i128;
            val[vt.v[&(i, k, l)]] = left_of_s;
            val[vt.w[&(i, k, l)]] = left_of_c;
            val[vt.wb[&(i, k, l)]] = left_of_cb;
            let len = tv(win.end - win.begin);
            u += (left_of_c - left_of_s) * len;
            ub += (left_of_cb - left_of_s) * len;
        }
        val[vt.u[i]] = u;
        val[vt.ub[i]] = ub;
    }
    val[vt.cmax] = cmax;

    for j in 0..o {
        for opt in &problem.op(j).options {
            let k = opt.machine;
            let first = tv(problem.setup(k, None, j));
            let mut preds = 0i128;
            let mut sum = 0i128;
            for &i in &problem.machine(k).eligible {
                if i == j {
                    continue;
                }
                let y = val[vt.y[&(i, j, k)]];
                preds += y;
                sum += y * tv(problem.setup(k, Some(i), j));
            }
            val[vt.xih[&(j, k)]] = sum + (1 - preds) * first;
            val[vt.xib[&(j, k)]] = val[vt.x[&(j, k)]] * val[vt.xi[j]];
        }
    }

    let mut violations = Vec::new();
    for (var, &x) in model.variables.iter().zip(&val) {
        let in_domain = match var.kind {
            VarKind::Binary => x == 0 || x == 1,
            VarKind::Continuous => {
                x >= var.lower as i128 && var.upper.is_none_or(|u| x <= u as i128)
            }
        };
        if !in_domain {
            violations.push(RowViolation {
                row: format!("bound_{}", var.name),
                lhs: x,
                sense: ">=".into(),
                rhs: var.lower as i128,
            });
        }
    }
    for row in &model.constraints {
        let lhs: i128 = row.terms.iter().map(|&(v, a)| a as i128 * val[v]).sum();
        if !row.sense.holds(lhs, row.rhs as i128) {
            violations.push(RowViolation {
                row: row.name.clone(),
                lhs,
                sense: row.sense.to_string(),
                rhs: row.rhs as i128,
            });
        }
    }
    Ok(Evaluation {
        model,
        values: val,
        violations,
    })
}
