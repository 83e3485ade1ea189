#![allow(dead_code)]

pub mod lp_reader;
pub mod oracle;

use std::collections::BTreeMap;

use opsched::generator::GenRng;
use opsched::{Calendar, Decision, FixedStart, Instance, Machine, OpId, OpPair, Operation, Schedule, Time, Window};

pub fn op(id: OpId, job: u32, eligible: &[(u32, Time)]) -> Operation {
    Operation {
        id,
        job,
        eligible: eligible.iter().copied().collect(),
        theta_hundredths: 100,
        release: 0,
        fixed: None,
        size: 1,
        color: 1,
        varnish: 1,
    }
}

pub fn machine(id: u32, windows: &[(Time, Time)]) -> Machine {
    Machine {
        id,
        calendar: Calendar::new(windows.iter().copied().map(Window::from).collect()).unwrap(),
        setup_first: BTreeMap::new(),
        setup_between: BTreeMap::new(),
        setup_rule: None,
    }
}

/// Fills every setup entry the instance needs with `first` / `between`.
pub fn fill_setups(inst: &mut Instance, first: Time, between: Time) {
    for m in &mut inst.machines {
        let elig: Vec<OpId> = inst
            .operations
            .iter()
            .filter(|o| o.eligible.contains_key(&m.id))
            .map(|o| o.id)
            .collect();
        for &i in &elig {
            m.setup_first.entry(i).or_insert(first);
            for &j in &elig {
                if i != j {
                    m.setup_between.entry(OpPair(i, j)).or_insert(between);
                }
            }
        }
    }
}

pub fn instance(machines: Vec<Machine>, operations: Vec<Operation>, arcs: Vec<(OpId, OpId)>) -> Instance {
    Instance {
        num_machines: machines.len() as u32,
        machines,
        operations,
        arcs,
    }
}

/// Knobs for [`random_instance`].
#[derive(Clone, Copy)]
pub struct Shape {
    pub max_ops: u32,
    pub max_machines: u32,
    pub max_windows: u32,
    pub overlap: bool,
    pub releases: bool,
    pub fixed: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_ops: 5,
            max_machines: 2,
            max_windows: 2,
            overlap: true,
            releases: true,
            fixed: true,
        }
    }
}

/// Small random instance with every feature switched on more often than
/// the class generator does.
pub fn random_instance(rng: &mut GenRng, shape: Shape) -> Instance {
    let m = rng.uniform(1, shape.max_machines.into()) as u32;
    let o = rng.uniform(1, shape.max_ops.into()) as u32;
    let jobs = rng.uniform(1, 2) as u32;
    let mut operations: Vec<Operation> = (1..=o)
        .map(|id| {
            let job = if jobs == 2 && id > o / 2 { 2 } else { 1 };
            let card = rng.uniform(1, m.into()) as usize;
            let ks = rng.subset(m, card);
            let eligible: Vec<(u32, Time)> = ks.iter().map(|&k| (k, rng.uniform(1, 9))).collect();
            let mut op = op(id, job, &eligible);
            op.size = rng.uniform(1, 3) as u32;
            op.color = rng.uniform(1, 2) as u32;
            op.varnish = rng.uniform(1, 2) as u32;
            if shape.releases && rng.chance(1, 4) {
                op.release = rng.uniform(1, 15);
            }
            op
        })
        .collect();
    let mut arcs = Vec::new();
    for a in 1..=o {
        for b in a + 1..=o {
            if operations[a as usize - 1].job == operations[b as usize - 1].job && rng.chance(1, 3) {
                arcs.push((a, b));
            }
        }
    }
    if shape.overlap {
        for &(a, _) in &arcs {
            let op = &mut operations[a as usize - 1];
            if op.theta_hundredths == 100 && rng.chance(1, 2) {
                op.theta_hundredths = rng.uniform(1, 99) as u32;
            }
        }
    }
    let mut machines: Vec<Machine> = (1..=m)
        .map(|id| {
            let q = rng.uniform(0, shape.max_windows.into());
            let mut ws = Vec::new();
            let mut t = 0;
            for _ in 0..q {
                let b = t + rng.uniform(1, 8);
                let e = b + rng.uniform(1, 5);
                ws.push((b, e));
                t = e;
            }
            machine(id, &ws)
        })
        .collect();
    if shape.fixed {
        let has_pred: Vec<bool> = (1..=o).map(|j| arcs.iter().any(|&(_, b)| b == j)).collect();
        let mut taken = vec![false; m as usize];
        for (i, op) in operations.iter_mut().enumerate() {
            if has_pred[i] || !rng.chance(1, 8) {
                continue;
            }
            let k = *op.eligible.keys().next().unwrap();
            if taken[k as usize - 1] {
                continue;
            }
            taken[k as usize - 1] = true;
            let p = op.eligible[&k];
            let start = rng.uniform(3, 25);
            let cal = &machines[k as usize - 1].calendar;
            if !cal.is_legal_start(start) {
                continue;
            }
            op.eligible = BTreeMap::from([(k, p)]);
            op.fixed = Some(FixedStart { machine: k, start });
        }
    }
    for mach in &mut machines {
        let elig: Vec<&Operation> = operations.iter().filter(|o| o.eligible.contains_key(&mach.id)).collect();
        for a in &elig {
            mach.setup_first.insert(a.id, rng.uniform(0, 3));
            for b in &elig {
                if a.id != b.id {
                    mach.setup_between.insert(OpPair(a.id, b.id), rng.uniform(0, 4));
                }
            }
        }
    }
    instance(machines, operations, arcs)
}

/// Random assignment, with each machine sequence a random order that
/// respects a topological order of the instance.
pub fn random_decision(rng: &mut GenRng, inst: &Instance) -> Decision {
    let topo = opsched::topological_order(inst).unwrap();
    // Random linear extension: repeatedly pick a random ready operation.
    let mut indeg: BTreeMap<OpId, usize> = inst.operations.iter().map(|o| (o.id, 0)).collect();
    for &(_, b) in &inst.arcs {
        *indeg.get_mut(&b).unwrap() += 1;
    }
    let mut ready: Vec<OpId> = topo.iter().copied().filter(|i| indeg[i] == 0).collect();
    let mut order = Vec::new();
    while !ready.is_empty() {
        let pick = ready.swap_remove(rng.index(ready.len()));
        order.push(pick);
        for &(a, b) in &inst.arcs {
            if a == pick {
                let d = indeg.get_mut(&b).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(b);
                }
            }
        }
    }
    let mut assignment = BTreeMap::new();
    let mut sequences: BTreeMap<u32, Vec<OpId>> = BTreeMap::new();
    for id in order {
        let op = inst.operation(id).unwrap();
        let ks: Vec<u32> = op.eligible.keys().copied().collect();
        let k = ks[rng.index(ks.len())];
        assignment.insert(id, k);
        sequences.entry(k).or_default().push(id);
    }
    Decision { assignment, sequences }
}

/// Timing mutations that keep `setup_start + setup_len == start` and the
/// sequence structure intact.
pub fn mutate_timing(rng: &mut GenRng, inst: &Instance, s: &Schedule) -> Schedule {
    let mut out = s.clone();
    let idx = rng.index(out.operations.len());
    let id = out.operations[idx].id;
    let o = &mut out.operations[idx];
    match rng.uniform(0, 4) {
        0 => {
            o.start += rng.uniform(1, 4);
            o.setup_start = o.start - o.setup_len;
            let opi = inst.operation(id).unwrap();
            let cal = &inst.machine(o.machine).unwrap().calendar;
            o.completion = cal.completion_from(o.start, opi.processing_time(o.machine).unwrap());
            o.partial_completion = cal.completion_from(o.start, opi.partial_time(o.machine).unwrap());
        }
        1 if o.start > o.setup_len => {
            o.start -= 1;
            o.setup_start = o.start - o.setup_len;
            let opi = inst.operation(id).unwrap();
            let cal = &inst.machine(o.machine).unwrap().calendar;
            o.completion = cal.completion_from(o.start, opi.processing_time(o.machine).unwrap());
            o.partial_completion = cal.completion_from(o.start, opi.partial_time(o.machine).unwrap());
        }
        2 => o.completion += 1,
        3 if o.setup_len > 0 => {
            o.setup_len -= 1;
            o.setup_start += 1;
        }
        _ => {
            o.partial_completion = o.partial_completion.saturating_sub(1);
        }
    }
    out
}
