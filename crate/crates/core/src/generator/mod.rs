//! Seeded random instances for the three instance classes.
//!
//! Draw order for a given seed:
//! 1. per job: `o_j`, layer widths, then arcs layer by layer;
//! 2. overlap fraction of every operation with successors, by id;
//! 3. the number of machines;
//! 4. per operation: `|F(i)|`, the subset, the primary machine, its time,
//!    then times on the other machines in ascending machine id;
//! 5. per operation: size, color, varnish;
//! 6. per machine: `st'`, `st''`, `ct`, `vt`, `q_k`, then one `R` per window;
//! 7. per operation: release;
//! 8. per source operation: fixed draw, machine, time and start.
//!
//! Setup tables are derived from the final eligibility sets without draws.

mod dag;
mod rng;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::calendar::{Calendar, Window};
use crate::instance::{FixedStart, Instance, Machine, MachineId, OpId, OpPair, Operation, SetupRule, Time};

pub use dag::{gen_job_dag, gen_layered_dag, JobDag};
pub use rng::GenRng;

/// Version recorded in manifests; bump whenever the draw order changes.
pub const GENERATOR_VERSION: &str = "1";

pub const MAX_SIZE: u32 = 10;
pub const MAX_COLOR: u32 = 4;
pub const MAX_VARNISH: u32 = 6;
/// Upper bound of any first-operation setup produced here.
pub const SETUP_FIRST_UB: Time = (MAX_SIZE + MAX_COLOR + MAX_VARNISH) as Time;

/// Above this many ordered pairs in total, machines carry a [`SetupRule`]
/// instead of explicit `setup_between` tables.
pub const EXPLICIT_SETUP_PAIR_LIMIT: usize = 250_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub n: u32,
    pub o_min: u32,
    pub o_max: u32,
    pub m_min: u32,
    pub m_max: u32,
    pub q: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("unknown instance class {0:?} (expected small, medium or large)")]
    UnknownClass(String),
    #[error("class index k must be positive")]
    ZeroIndex,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl GenParams {
    pub fn with_seed(self, seed: u64) -> Self {
        GenParams { seed, ..self }
    }

    pub fn check(&self) -> Result<(), GenError> {
        let bad = |s: &str| Err(GenError::InvalidParams(s.into()));
        if self.n == 0 || self.o_min == 0 || self.m_min == 0 || self.q == 0 {
            return bad("n, o_min, m_min and q must be positive");
        }
        if self.o_min > self.o_max {
            return bad("o_min exceeds o_max");
        }
        if self.m_min > self.m_max {
            return bad("m_min exceeds m_max");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceClass {
    Small,
    Medium,
    Large,
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceClass::Small => "small",
            InstanceClass::Medium => "medium",
            InstanceClass::Large => "large",
        })
    }
}

impl FromStr for InstanceClass {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "small" => Ok(InstanceClass::Small),
            "medium" => Ok(InstanceClass::Medium),
            "large" => Ok(InstanceClass::Large),
            _ => Err(GenError::UnknownClass(s.into())),
        }
    }
}

/// `ceil(k * a / b)` in integers.
fn scaled(k: u32, a: u32, b: u32) -> u32 {
    (k * a).div_ceil(b)
}

/// Class preset for instance index `k`; the returned seed is 0.
pub fn params_for_class(class: InstanceClass, k: u32) -> Result<GenParams, GenError> {
    if k == 0 {
        return Err(GenError::ZeroIndex);
    }
    let p = match class {
        InstanceClass::Small => GenParams {
            n: 1 + scaled(k, 3, 30),
            o_min: 2,
            o_max: 3 + scaled(k, 2, 30),
            m_min: 2,
            m_max: 3 + scaled(k, 2, 30),
            q: 4,
            seed: 0,
        },
        InstanceClass::Medium => GenParams {
            n: 4 + scaled(k, 6, 20),
            o_min: 6,
            o_max: 7 + scaled(k, 5, 20),
            m_min: 6,
            m_max: 7 + scaled(k, 13, 20),
            q: 8,
            seed: 0,
        },
        InstanceClass::Large => GenParams {
            n: 11 + scaled(k, 189, 100),
            o_min: 5,
            o_max: 6 + scaled(k, 14, 100),
            m_min: 9 + scaled(k, 20, 100),
            m_max: 10 + scaled(k, 90, 100),
            q: 8,
            seed: 0,
        },
    };
    Ok(p)
}

/// Overlap fraction of an operation with successors, in hundredths.
pub fn gen_theta(rng: &mut GenRng) -> u32 {
    if rng.chance(1, 10) {
        rng.uniform(50, 99) as u32
    } else {
        100
    }
}

/// Release time: 0 with probability 0.975, else uniform in `[1, 99]`.
pub fn gen_release(rng: &mut GenRng) -> Time {
    if rng.chance(975, 1000) {
        0
    } else {
        rng.uniform(1, 99)
    }
}

/// Eligible machines and processing times of one operation on `m` machines.
pub fn gen_eligibility(rng: &mut GenRng, m: u32) -> BTreeMap<MachineId, Time> {
    let lo = (3 * m).div_ceil(10) as u64;
    let hi = (7 * m).div_ceil(10) as u64;
    let card = rng.uniform(lo.max(1), hi.max(1)) as usize;
    let machines = rng.subset(m, card);
    let primary = machines[rng.index(machines.len())];
    let p = rng.uniform(1, 99);
    let mut out = BTreeMap::from([(primary, p)]);
    for &k in &machines {
        if k != primary {
            out.insert(k, rng.uniform(p, (3 * p).min(99)));
        }
    }
    out
}

/// Per-machine setup constants `st'`, `st''`, `ct`, `vt`, each in `[2, 6]`.
pub fn gen_setup_rule(rng: &mut GenRng) -> SetupRule {
    SetupRule {
        size_up: rng.uniform(2, 6),
        size_down: rng.uniform(2, 6),
        color: rng.uniform(2, 6),
        varnish: rng.uniform(2, 6),
    }
}

pub type SetupTables = (BTreeMap<OpId, Time>, BTreeMap<OpPair, Time>);

/// Setup tables of one machine for the operations eligible on it.
pub fn gen_setups(rule: &SetupRule, ops: &[&Operation]) -> SetupTables {
    let first = ops.iter().map(|op| (op.id, rule.first())).collect();
    let mut between = BTreeMap::new();
    for a in ops {
        for b in ops {
            if a.id != b.id {
                between.insert(OpPair(a.id, b.id), rule.between(a, b));
            }
        }
    }
    (first, between)
}

/// Distance between consecutive windows, `1 + ceil(mean / q_k)` where the
/// mean is `proc_sum / proc_count` (taken as 0 with no operations).
pub fn window_spacing(proc_sum: Time, proc_count: usize, q_k: u32) -> Time {
    if proc_count == 0 {
        return 1;
    }
    1 + proc_sum.div_ceil(proc_count as Time * Time::from(q_k))
}

/// Windows with spacing `a` and one width divisor per window.
pub fn windows_from(a: Time, divisors: &[Time]) -> Vec<Window> {
    let mut out = Vec::with_capacity(divisors.len());
    let mut begin = a;
    for &r in divisors {
        let end = begin + a.div_ceil(r) + 1;
        out.push(Window { begin, end });
        begin = end + a;
    }
    out
}

/// Draws `q_k` in `[1, q]` and one divisor in `[2, 10]` per window.
pub fn gen_unavailability(rng: &mut GenRng, q: u32, proc_times: &[Time]) -> Vec<Window> {
    let q_k = rng.uniform(1, q.into()) as u32;
    let a = window_spacing(proc_times.iter().sum(), proc_times.len(), q_k);
    let divisors: Vec<Time> = (0..q_k).map(|_| rng.uniform(2, 10)).collect();
    windows_from(a, &divisors)
}

/// Draws releases, then pins a few source operations to a fixed start
/// before the first window of their machine.
///
/// `first_window_begin[k - 1]` is the begin of machine `k`'s first window.
pub fn gen_release_and_fixed(
    rng: &mut GenRng,
    ops: &mut [Operation],
    arcs: &[(OpId, OpId)],
    first_window_begin: &[Time],
) {
    for op in ops.iter_mut() {
        op.release = gen_release(rng);
    }
    let mut has_pred = vec![false; ops.len()];
    for &(_, b) in arcs {
        has_pred[b as usize - 1] = true;
    }
    let mut machine_taken = vec![false; first_window_begin.len()];
    for (i, op) in ops.iter_mut().enumerate() {
        if has_pred[i] || !rng.chance(1, 100) {
            continue;
        }
        let free: Vec<MachineId> = op
            .eligible
            .keys()
            .copied()
            .filter(|&k| !machine_taken[k as usize - 1])
            .collect();
        if free.is_empty() {
            continue;
        }
        let k = free[rng.index(free.len())];
        let p = rng.uniform(1, 99);
        let lo = SETUP_FIRST_UB.max(op.release);
        let Some(hi) = first_window_begin[k as usize - 1].checked_sub(p) else {
            continue;
        };
        if lo > hi {
            continue;
        }
        let start = rng.uniform(lo, hi);
        op.eligible = BTreeMap::from([(k, p)]);
        op.fixed = Some(FixedStart { machine: k, start });
        machine_taken[k as usize - 1] = true;
    }
}

/// Generates an instance; deterministic in `params`.
pub fn generate(params: &GenParams) -> Result<Instance, GenError> {
    params.check()?;
    let mut rng = GenRng::new(params.seed);

    let mut operations: Vec<Operation> = Vec::new();
    let mut arcs: Vec<(OpId, OpId)> = Vec::new();
    for job in 1..=params.n {
        let dag = gen_job_dag(&mut rng, params.o_min, params.o_max);
        let offset = operations.len() as OpId;
        for local in 1..=dag.size {
            operations.push(Operation {
                id: offset + local,
                job,
                eligible: BTreeMap::new(),
                theta_hundredths: 100,
                release: 0,
                fixed: None,
                size: 1,
                color: 1,
                varnish: 1,
            });
        }
        arcs.extend(dag.arcs.iter().map(|&(a, b)| (a + offset, b + offset)));
    }

    let mut has_succ = vec![false; operations.len()];
    for &(a, _) in &arcs {
        has_succ[a as usize - 1] = true;
    }
    for (op, &succ) in operations.iter_mut().zip(&has_succ) {
        if succ {
            op.theta_hundredths = gen_theta(&mut rng);
        }
    }

    let m = rng.uniform(params.m_min.into(), params.m_max.into()) as u32;
    for op in operations.iter_mut() {
        op.eligible = gen_eligibility(&mut rng, m);
    }
    for op in operations.iter_mut() {
        op.size = rng.uniform(1, MAX_SIZE.into()) as u32;
        op.color = rng.uniform(1, MAX_COLOR.into()) as u32;
        op.varnish = rng.uniform(1, MAX_VARNISH.into()) as u32;
    }

    let mut rules = Vec::with_capacity(m as usize);
    let mut calendars = Vec::with_capacity(m as usize);
    for k in 1..=m {
        rules.push(gen_setup_rule(&mut rng));
        let procs: Vec<Time> = operations
            .iter()
            .filter_map(|op| op.eligible.get(&k).copied())
            .collect();
        calendars.push(gen_unavailability(&mut rng, params.q, &procs));
    }

    let first_begin: Vec<Time> = calendars.iter().map(|ws| ws[0].begin).collect();
    gen_release_and_fixed(&mut rng, &mut operations, &arcs, &first_begin);

    let mut eligible: Vec<Vec<&Operation>> = vec![Vec::new(); m as usize];
    for op in &operations {
        for &k in op.eligible.keys() {
            eligible[k as usize - 1].push(op);
        }
    }
    let pairs: usize = eligible.iter().map(|e| e.len() * e.len().saturating_sub(1)).sum();
    let explicit = pairs <= EXPLICIT_SETUP_PAIR_LIMIT;

    let machines = (1..=m)
        .zip(rules)
        .zip(calendars)
        .map(|((id, rule), windows)| {
            let ops = &eligible[id as usize - 1];
            let (setup_first, setup_between) = if explicit {
                gen_setups(&rule, ops)
            } else {
                (ops.iter().map(|op| (op.id, rule.first())).collect(), BTreeMap::new())
            };
            Machine {
                id,
                calendar: Calendar::new(windows).expect("generated windows are ordered"),
                setup_first,
                setup_between,
                setup_rule: (!explicit).then_some(rule),
            }
        })
        .collect();

    arcs.sort_unstable();
    Ok(Instance {
        num_machines: m,
        machines,
        operations,
        arcs,
    })
}

/// Size summary of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceStats {
    pub jobs: usize,
    pub operations: usize,
    pub arcs: usize,
    pub machines: usize,
    pub windows: usize,
    pub fixed: usize,
    pub nonzero_releases: usize,
    pub overlapping: usize,
    pub eligible_pairs: usize,
}

pub fn instance_stats(inst: &Instance) -> InstanceStats {
    let mut jobs: Vec<u32> = inst.operations.iter().map(|o| o.job).collect();
    jobs.sort_unstable();
    jobs.dedup();
    InstanceStats {
        jobs: jobs.len(),
        operations: inst.operations.len(),
        arcs: inst.arcs.len(),
        machines: inst.machines.len(),
        windows: inst.machines.iter().map(|m| m.calendar.windows().len()).sum(),
        fixed: inst.operations.iter().filter(|o| o.fixed.is_some()).count(),
        nonzero_releases: inst.operations.iter().filter(|o| o.release > 0).count(),
        overlapping: inst.operations.iter().filter(|o| o.theta_hundredths < 100).count(),
        eligible_pairs: inst.operations.iter().map(|o| o.eligible.len()).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::validate_instance;

    #[test]
    fn class_presets() {
        let l = params_for_class(InstanceClass::Large, 50).unwrap();
        assert_eq!((l.n, l.m_min, l.m_max, l.o_max, l.q), (106, 19, 55, 13, 8));
        let s = params_for_class(InstanceClass::Small, 30).unwrap();
        assert_eq!((s.n, s.o_max, s.m_max, s.q), (4, 5, 5, 4));
        let m = params_for_class(InstanceClass::Medium, 20).unwrap();
        assert_eq!((m.n, m.o_max, m.m_max, m.q), (10, 12, 20, 8));
        assert!(params_for_class(InstanceClass::Small, 31).is_ok());
        assert_eq!(params_for_class(InstanceClass::Small, 0), Err(GenError::ZeroIndex));
        assert!("tiny".parse::<InstanceClass>().is_err());
    }

    #[test]
    fn pinned_window_example() {
        assert_eq!(window_spacing(36, 3, 3), 5);
        let ws = windows_from(5, &[2, 2, 2]);
        let pairs: Vec<(Time, Time)> = ws.into_iter().map(Into::into).collect();
        assert_eq!(pairs, vec![(5, 9), (14, 18), (23, 27)]);
    }

    #[test]
    fn setup_rule_examples() {
        let rule = SetupRule {
            size_up: 4,
            size_down: 3,
            color: 2,
            varnish: 5,
        };
        assert_eq!(rule.between_features((3, 1, 2), (5, 2, 2)), 6);
        assert_eq!(rule.between_features((3, 1, 2), (3, 1, 2)), 0);
        let flat = SetupRule {
            size_up: 2,
            size_down: 2,
            color: 2,
            varnish: 2,
        };
        assert_eq!(flat.first(), 6);
        assert_eq!(SETUP_FIRST_UB, 20);
    }

    #[test]
    fn generated_instances_validate() {
        for class in [InstanceClass::Small, InstanceClass::Medium] {
            for k in [1, 10, 20] {
                for seed in 0..5 {
                    let p = params_for_class(class, k).unwrap().with_seed(seed);
                    let inst = generate(&p).unwrap();
                    let report = validate_instance(&inst);
                    assert!(report.is_empty(), "{class} {k} {seed}: {report:?}");
                    assert!((p.m_min..=p.m_max).contains(&inst.num_machines));
                }
            }
        }
    }

    #[test]
    fn deterministic_output() {
        let p = params_for_class(InstanceClass::Small, 5).unwrap().with_seed(17);
        assert_eq!(generate(&p).unwrap().to_json_pretty(), generate(&p).unwrap().to_json_pretty());
    }
}
