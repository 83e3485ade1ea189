//! Dense, index-based view of a validated instance used by the timing and
//! solver code. Operation `id` lives at index `id - 1`, machine `id` at
//! index `id - 1`.

use std::collections::HashMap;

use crate::calendar::Calendar;
use crate::graph::topological_order;
use crate::instance::{partial_len, Instance, MachineId, OpId, OpPair, SetupRule, Time};
use crate::report::Report;
use crate::validate::validate_instance;

#[derive(Debug, thiserror::Error)]
#[error("invalid instance: {} violation(s), first: {}", .0.len(), .0.violations.first().map(|v| v.detail.as_str()).unwrap_or(""))]
pub struct InvalidInstance(pub Report);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpOption {
    pub machine: usize,
    pub proc: Time,
    pub partial: Time,
}

#[derive(Debug, Clone)]
pub struct OpInfo {
    pub id: OpId,
    pub job: u32,
    /// Ascending by machine index.
    pub options: Vec<OpOption>,
    pub release: Time,
    /// Pinned machine index and start.
    pub fixed: Option<(usize, Time)>,
    pub theta_hundredths: u32,
    features: (u32, u32, u32),
}

impl OpInfo {
    pub fn option(&self, machine: usize) -> Option<&OpOption> {
        self.options.iter().find(|o| o.machine == machine)
    }

    pub fn min_proc(&self) -> Time {
        self.options.iter().map(|o| o.proc).min().unwrap_or(0)
    }

    pub fn min_partial(&self) -> Time {
        self.options.iter().map(|o| o.partial).min().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
enum SetupTable {
    Explicit(HashMap<(usize, usize), Time>),
    Rule(SetupRule),
}

#[derive(Debug, Clone)]
pub struct MachineInfo {
    pub id: MachineId,
    pub calendar: Calendar,
    /// Operation indices that may run here, ascending.
    pub eligible: Vec<usize>,
    setup_first: HashMap<usize, Time>,
    between: SetupTable,
}

#[derive(Debug, Clone)]
pub struct Problem {
    ops: Vec<OpInfo>,
    machines: Vec<MachineInfo>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    topo: Vec<usize>,
    /// Fixed operations pinned to each machine.
    fixed_on: Vec<Vec<usize>>,
}

impl Problem {
    pub fn new(inst: &Instance) -> Result<Self, InvalidInstance> {
        let report = validate_instance(inst);
        if !report.is_empty() {
            return Err(InvalidInstance(report));
        }
        let o = inst.operations.len();
        let m = inst.machines.len();
        let mut ops: Vec<Option<OpInfo>> = vec![None; o];
        for op in &inst.operations {
            let options = op
                .eligible
                .iter()
                .map(|(&k, &p)| OpOption {
                    machine: k as usize - 1,
                    proc: p,
                    partial: partial_len(op.theta_hundredths, p),
                })
                .collect();
            ops[op.id as usize - 1] = Some(OpInfo {
                id: op.id,
                job: op.job,
                options,
                release: op.release,
                fixed: op.fixed.map(|f| (f.machine as usize - 1, f.start)),
                theta_hundredths: op.theta_hundredths,
                features: (op.size, op.color, op.varnish),
            });
        }
        let ops: Vec<OpInfo> = ops.into_iter().map(Option::unwrap).collect();

        let mut machines: Vec<Option<MachineInfo>> = vec![None; m];
        for mach in &inst.machines {
            let k = mach.id as usize - 1;
            let eligible: Vec<usize> = ops
                .iter()
                .enumerate()
                .filter(|(_, op)| op.option(k).is_some())
                .map(|(i, _)| i)
                .collect();
            let between = match mach.setup_rule {
                Some(rule) => SetupTable::Rule(rule),
                None => SetupTable::Explicit(
                    mach.setup_between
                        .iter()
                        .map(|(&OpPair(a, b), &g)| ((a as usize - 1, b as usize - 1), g))
                        .collect(),
                ),
            };
            machines[k] = Some(MachineInfo {
                id: mach.id,
                calendar: mach.calendar.clone(),
                eligible,
                setup_first: mach
                    .setup_first
                    .iter()
                    .map(|(&i, &g)| (i as usize - 1, g))
                    .collect(),
                between,
            });
        }
        let machines: Vec<MachineInfo> = machines.into_iter().map(Option::unwrap).collect();

        let mut preds = vec![Vec::new(); o];
        let mut succs = vec![Vec::new(); o];
        for &(a, b) in &inst.arcs {
            succs[a as usize - 1].push(b as usize - 1);
            preds[b as usize - 1].push(a as usize - 1);
        }
        for v in preds.iter_mut().chain(succs.iter_mut()) {
            v.sort_unstable();
        }
        let topo = topological_order(inst)
            .expect("validated instance is acyclic")
            .into_iter()
            .map(|id| id as usize - 1)
            .collect();
        let mut fixed_on = vec![Vec::new(); m];
        for (i, op) in ops.iter().enumerate() {
            if let Some((k, _)) = op.fixed {
                fixed_on[k].push(i);
            }
        }

        Ok(Problem {
            ops,
            machines,
            preds,
            succs,
            topo,
            fixed_on,
        })
    }

    pub fn num_ops(&self) -> usize {
        self.ops.len()
    }

    pub fn num_machines(&self) -> usize {
        self.machines.len()
    }

    pub fn op(&self, i: usize) -> &OpInfo {
        &self.ops[i]
    }

    pub fn ops(&self) -> &[OpInfo] {
        &self.ops
    }

    pub fn machine(&self, k: usize) -> &MachineInfo {
        &self.machines[k]
    }

    pub fn machines(&self) -> &[MachineInfo] {
        &self.machines
    }

    pub fn preds(&self, i: usize) -> &[usize] {
        &self.preds[i]
    }

    pub fn succs(&self, i: usize) -> &[usize] {
        &self.succs[i]
    }

    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    /// Fixed operations pinned to machine `k`.
    pub fn fixed_on(&self, k: usize) -> &[usize] {
        &self.fixed_on[k]
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.succs[from].binary_search(&to).is_ok()
    }

    pub fn index_of(&self, id: OpId) -> Option<usize> {
        let i = (id as usize).checked_sub(1)?;
        (i < self.ops.len()).then_some(i)
    }

    pub fn machine_index(&self, id: MachineId) -> Option<usize> {
        let k = (id as usize).checked_sub(1)?;
        (k < self.machines.len()).then_some(k)
    }

    /// Setup before `j` on machine `k`, given its immediate predecessor.
    pub fn setup(&self, k: usize, prev: Option<usize>, j: usize) -> Time {
        let mach = &self.machines[k];
        match prev {
            None => mach.setup_first.get(&j).copied().unwrap_or(0),
            Some(i) => match &mach.between {
                SetupTable::Explicit(map) => map.get(&(i, j)).copied().unwrap_or(0),
                SetupTable::Rule(rule) => {
                    rule.between_features(self.ops[i].features, self.ops[j].features)
                }
            },
        }
    }
}
