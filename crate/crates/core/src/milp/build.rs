use std::collections::HashMap;

use crate::bigm::BigM;
use crate::instance::{Instance, Time};
use crate::problem::{InvalidInstance, Problem};

use super::{MilpModel, Sense, VarKind};

fn t(v: Time) -> i64 {
    i64::try_from(v).expect("time constant exceeds i64")
}

/// Variable indices of a model, keyed by dense operation and machine indices.
pub(crate) struct VarTable {
    pub x: HashMap<(usize, usize), usize>,
    pub y: HashMap<(usize, usize, usize), usize>,
    pub s: Vec<usize>,
    pub c: Vec<usize>,
    pub cb: Vec<usize>,
    pub pp: Vec<usize>,
    pub ppb: Vec<usize>,
    pub u: Vec<usize>,
    pub ub: Vec<usize>,
    pub v: HashMap<(usize, usize, usize), usize>,
    pub w: HashMap<(usize, usize, usize), usize>,
    pub wb: HashMap<(usize, usize, usize), usize>,
    pub xih: HashMap<(usize, usize), usize>,
    pub xib: HashMap<(usize, usize), usize>,
    pub xi: Vec<usize>,
    pub cmax: usize,
}

/// Builds the full model with the given big-M constants.
pub fn build_model(inst: &Instance, bigm: &BigM) -> Result<MilpModel, InvalidInstance> {
    let problem = Problem::new(inst)?;
    Ok(build_with_table(&problem, bigm).0)
}

pub(crate) fn build_with_table(problem: &Problem, bigm: &BigM) -> (MilpModel, VarTable) {
    let mut model = MilpModel::default();
    let o = problem.num_ops();
    let id = |i: usize| problem.op(i).id;
    let mid = |k: usize| problem.machine(k).id;
    let windows = |k: usize| problem.machine(k).calendar.windows();
    let (m1, m2, m3) = (t(bigm.m1), t(bigm.m2), t(bigm.m3));

    // Variables.
    let mut x = HashMap::new();
    for i in 0..o {
        for opt in &problem.op(i).options {
            let k = opt.machine;
            x.insert((i, k), model.add_var(format!("x_{}_{}", id(i), mid(k)), VarKind::Binary));
        }
    }
    let mut y = HashMap::new();
    for i in 0..o {
        for j in 0..o {
            if i == j {
                continue;
            }
            for opt in &problem.op(i).options {
                let k = opt.machine;
                if problem.op(j).option(k).is_some() {
                    let name = format!("yI_{}_{}_{}", id(i), id(j), mid(k));
                    y.insert((i, j, k), model.add_var(name, VarKind::Binary));
                }
            }
        }
    }
    let per_op = |prefix: &str, model: &mut MilpModel| -> Vec<usize> {
        (0..o)
            .map(|i| model.add_var(format!("{prefix}_{}", id(i)), VarKind::Continuous))
            .collect()
    };
    let s = per_op("s", &mut model);
    let c = per_op("c", &mut model);
    let cb = per_op("cb", &mut model);
    let pp = per_op("pp", &mut model);
    let ppb = per_op("ppb", &mut model);
    let u = per_op("u", &mut model);
    let ub = per_op("ub", &mut model);
    let indicators = |prefix: &str, model: &mut MilpModel| {
        let mut out = HashMap::new();
        for i in 0..o {
            for opt in &problem.op(i).options {
                let k = opt.machine;
                for l in 0..windows(k).len() {
                    let name = format!("{prefix}_{}_{}_{}", id(i), mid(k), l + 1);
                    out.insert((i, k, l), model.add_var(name, VarKind::Binary));
                }
            }
        }
        out
    };
    let v = indicators("v", &mut model);
    let w = indicators("w", &mut model);
    let wb = indicators("wb", &mut model);
    let per_option = |prefix: &str, model: &mut MilpModel| {
        let mut out = HashMap::new();
        for j in 0..o {
            for opt in &problem.op(j).options {
                let name = format!("{prefix}_{}_{}", id(j), mid(opt.machine));
                out.insert((j, opt.machine), model.add_var(name, VarKind::Continuous));
            }
        }
        out
    };
    let xih = per_option("xih", &mut model);
    let xib = per_option("xib", &mut model);
    let xi = per_op("xi", &mut model);
    let cmax = model.add_var("Cmax".into(), VarKind::Continuous);
    model.objective = cmax;

    // Assignment, processing times, release and fixed starts.
    for i in 0..o {
        let op = problem.op(i);
        let n = id(i);
        let xs: Vec<(usize, i64)> = op.options.iter().map(|p| (x[&(i, p.machine)], 1)).collect();
        model.add_row(format!("assign_{n}"), &xs, Sense::Eq, 1);
        let mut row = vec![(pp[i], 1)];
        row.extend(op.options.iter().map(|p| (x[&(i, p.machine)], -t(p.proc))));
        model.add_row(format!("ptime_{n}"), &row, Sense::Eq, 0);
        let mut row = vec![(ppb[i], 1)];
        row.extend(op.options.iter().map(|p| (x[&(i, p.machine)], -t(p.partial))));
        model.add_row(format!("pbar_{n}"), &row, Sense::Eq, 0);
        model.add_row(format!("release_{n}"), &[(s[i], 1)], Sense::Ge, t(op.release));
        if let Some((_, start)) = op.fixed {
            model.add_row(format!("fix_{n}"), &[(s[i], 1)], Sense::Eq, t(start));
        }
    }

    // Unavailable time and completion definitions.
    for i in 0..o {
        let n = id(i);
        let mut row_u = vec![(u[i], 1)];
        let mut row_ub = vec![(ub[i], 1)];
        for opt in &problem.op(i).options {
            let k = opt.machine;
            for (l, win) in windows(k).iter().enumerate() {
                let len = t(win.end - win.begin);
                row_u.push((w[&(i, k, l)], -len));
                row_u.push((v[&(i, k, l)], len));
                row_ub.push((wb[&(i, k, l)], -len));
                row_ub.push((v[&(i, k, l)], len));
            }
        }
        model.add_row(format!("u_def_{n}"), &row_u, Sense::Eq, 0);
        model.add_row(format!("ubar_def_{n}"), &row_ub, Sense::Eq, 0);
        model.add_row(format!("order_s_cb_{n}"), &[(s[i], 1), (cb[i], -1)], Sense::Le, 0);
        model.add_row(format!("order_cb_c_{n}"), &[(cb[i], 1), (c[i], -1)], Sense::Le, 0);
        model.add_row(format!("c_def_{n}"), &[(s[i], 1), (pp[i], 1), (u[i], 1), (c[i], -1)], Sense::Eq, 0);
        model.add_row(format!("cbar_def_{n}"), &[(s[i], 1), (ppb[i], 1), (ub[i], 1), (cb[i], -1)], Sense::Eq, 0);
        model.add_row(format!("makespan_{n}"), &[(c[i], 1), (cmax, -1)], Sense::Le, 0);
    }

    // Precedence with partial overlap.
    for j in 0..o {
        for &i in problem.preds(j) {
            let (a, b) = (id(i), id(j));
            model.add_row(format!("prec_partial_{a}_{b}"), &[(cb[i], 1), (s[j], -1)], Sense::Le, 0);
            model.add_row(format!("prec_end_{a}_{b}"), &[(c[i], 1), (c[j], -1)], Sense::Le, 0);
        }
    }

    // Immediate-predecessor structure per machine.
    for k in 0..problem.num_machines() {
        let mk = mid(k);
        let elig = &problem.machine(k).eligible;
        for &i in elig {
            for &j in elig {
                if i == j {
                    continue;
                }
                let yv = y[&(i, j, k)];
                let (a, b) = (id(i), id(j));
                model.add_row(format!("setup1_pred_{a}_{b}_{mk}"), &[(yv, 1), (x[&(i, k)], -1)], Sense::Le, 0);
                model.add_row(format!("setup1_succ_{a}_{b}_{mk}"), &[(yv, 1), (x[&(j, k)], -1)], Sense::Le, 0);
            }
        }
        // A machine with no operation has no chain; cycles are excluded by
        // the timing rows.
        let mut chain: Vec<(usize, i64)> = Vec::new();
        for &i in elig {
            for &j in elig {
                if i != j {
                    chain.push((y[&(i, j, k)], 1));
                }
            }
        }
        chain.extend(elig.iter().map(|&i| (x[&(i, k)], -1)));
        model.add_row(format!("setup2_chain_{mk}"), &chain, Sense::Ge, -1);
        for &i in elig {
            let out: Vec<(usize, i64)> = elig
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| (y[&(i, j, k)], 1))
                .collect();
            model.add_row(format!("setup3_out_{}_{mk}", id(i)), &out, Sense::Le, 1);
        }
        for &j in elig {
            let inc: Vec<(usize, i64)> = elig
                .iter()
                .filter(|&&i| i != j)
                .map(|&i| (y[&(i, j, k)], 1))
                .collect();
            model.add_row(format!("setup4_in_{}_{mk}", id(j)), &inc, Sense::Le, 1);
        }
    }

    // Setup time of each operation.
    for j in 0..o {
        let n = id(j);
        let mut xi_row = vec![(xi[j], 1)];
        for opt in &problem.op(j).options {
            let k = opt.machine;
            let mk = mid(k);
            let first = t(problem.setup(k, None, j));
            let mut row = vec![(xih[&(j, k)], 1)];
            for &i in &problem.machine(k).eligible {
                if i != j {
                    let between = t(problem.setup(k, Some(i), j));
                    row.push((y[&(i, j, k)], -(between - first)));
                }
            }
            model.add_row(format!("setup5_{n}_{mk}"), &row, Sense::Eq, first);
            let (xb, xh, xv) = (xib[&(j, k)], xih[&(j, k)], x[&(j, k)]);
            model.add_row(format!("setup6_cap_{n}_{mk}"), &[(xb, 1), (xv, -m1)], Sense::Le, 0);
            model.add_row(format!("setup6_lo_{n}_{mk}"), &[(xb, 1), (xh, -1), (xv, -m1)], Sense::Ge, -m1);
            model.add_row(format!("setup6_hi_{n}_{mk}"), &[(xb, 1), (xh, -1)], Sense::Le, 0);
            xi_row.push((xb, -1));
        }
        model.add_row(format!("setup7_{n}"), &xi_row, Sense::Eq, 0);
    }

    // Machine sequencing with setups.
    for (i, &ci) in c.iter().enumerate() {
        for j in 0..o {
            if i == j {
                continue;
            }
            let mut row = vec![(ci, 1)];
            for opt in &problem.op(i).options {
                if let Some(&yv) = y.get(&(i, j, opt.machine)) {
                    row.push((yv, m2));
                }
            }
            if row.len() == 1 {
                continue;
            }
            row.push((s[j], -1));
            row.push((xi[j], 1));
            model.add_row(format!("setup_gap_{}_{}", id(i), id(j)), &row, Sense::Le, m2);
        }
    }
    for (i, (&si, &xii)) in s.iter().zip(&xi).enumerate() {
        model.add_row(format!("setup_start_{}", id(i)), &[(si, 1), (xii, -1)], Sense::Ge, 0);
    }

    // Windows: starts, setups, completions and partial completions.
    for i in 0..o {
        let n = id(i);
        for opt in &problem.op(i).options {
            let k = opt.machine;
            let mk = mid(k);
            let xv = x[&(i, k)];
            for (l, win) in windows(k).iter().enumerate() {
                let (lo, hi) = (t(win.begin), t(win.end));
                let tag = format!("{n}_{mk}_{}", l + 1);
                let (vv, wv, wbv) = (v[&(i, k, l)], w[&(i, k, l)], wb[&(i, k, l)]);
                model.add_row(format!("win_v_{tag}"), &[(vv, 1), (xv, -1)], Sense::Le, 0);
                model.add_row(format!("win_s_le_{tag}"), &[(s[i], 1), (vv, -m2), (xv, m2)], Sense::Le, lo - 1 + m2);
                model.add_row(format!("win_s_ge_{tag}"), &[(s[i], 1), (xi[i], -1), (vv, -m3), (xv, -m3)], Sense::Ge, hi - 2 * m3);
                model.add_row(format!("win_w_{tag}"), &[(wv, 1), (xv, -1)], Sense::Le, 0);
                model.add_row(format!("win_c_le_{tag}"), &[(c[i], 1), (wv, -m2), (xv, m2)], Sense::Le, lo + m2);
                model.add_row(format!("win_c_ge_{tag}"), &[(c[i], 1), (wv, -m3), (xv, -m3)], Sense::Ge, hi + 1 - 2 * m3);
                model.add_row(format!("win_wb_{tag}"), &[(wbv, 1), (xv, -1)], Sense::Le, 0);
                model.add_row(format!("win_cb_le_{tag}"), &[(cb[i], 1), (wbv, -m2), (xv, m2)], Sense::Le, lo + m2);
                model.add_row(format!("win_cb_ge_{tag}"), &[(cb[i], 1), (wbv, -m3), (xv, -m3)], Sense::Ge, hi + 1 - 2 * m3);
            }
        }
    }

    let table = VarTable {
        x,
        y,
        s,
        c,
        cb,
        pp,
        ppb,
        u,
        ub,
        v,
        w,
        wb,
        xih,
        xib,
        xi,
        cmax,
    };
    (model, table)
}
