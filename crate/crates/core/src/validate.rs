//! Structural validation of instances.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{order_ids, GraphError};
use crate::instance::{Instance, OpId, OpPair};
use crate::report::Report;

/// Checks every structural invariant of `inst` and reports each violation.
pub fn validate_instance(inst: &Instance) -> Report {
    let mut report = Report::new();

    if inst.num_machines == 0 {
        report.push("no machines", vec![], "m must be positive");
    }
    if inst.machines.len() != inst.num_machines as usize {
        report.push(
            "machine count mismatch",
            vec![],
            format!("m = {} but {} machines listed", inst.num_machines, inst.machines.len()),
        );
    }
    let machine_ids: BTreeSet<u32> = inst.machines.iter().map(|m| m.id).collect();
    let expected_machines: BTreeSet<u32> = (1..=inst.num_machines).collect();
    if machine_ids != expected_machines || machine_ids.len() != inst.machines.len() {
        report.push(
            "machine ids must be 1..m",
            vec![],
            format!("machine ids {machine_ids:?}"),
        );
    }

    let op_ids: BTreeSet<OpId> = inst.operations.iter().map(|o| o.id).collect();
    let o = inst.operations.len() as OpId;
    if op_ids.len() != inst.operations.len() || op_ids != (1..=o).collect() {
        report.push(
            "operation ids must be 1..o",
            vec![],
            format!("{} operations with ids {:?}", inst.operations.len(), op_ids),
        );
    }

    let mut has_successor: BTreeSet<OpId> = BTreeSet::new();
    let mut seen_arcs = BTreeSet::new();
    let job_of: BTreeMap<OpId, u32> = inst.operations.iter().map(|o| (o.id, o.job)).collect();
    let mut arcs_known = true;
    for &(a, b) in &inst.arcs {
        if !op_ids.contains(&a) || !op_ids.contains(&b) {
            report.push("unknown operation in arc", vec![a, b], format!("arc ({a}, {b})"));
            arcs_known = false;
            continue;
        }
        if a == b {
            report.push("self loop", vec![a], format!("arc ({a}, {a})"));
        }
        if !seen_arcs.insert((a, b)) {
            report.push("duplicate arc", vec![a, b], format!("arc ({a}, {b}) listed twice"));
        }
        if job_of[&a] != job_of[&b] {
            report.push(
                "arc crosses jobs",
                vec![a, b],
                format!("operation {a} is in job {} and {b} in job {}", job_of[&a], job_of[&b]),
            );
        }
        has_successor.insert(a);
    }
    if arcs_known {
        let ids: Vec<OpId> = op_ids.iter().copied().collect();
        if let Err(GraphError::Cycle { witness }) = order_ids(&ids, &inst.arcs) {
            report.push(
                "cycle",
                witness.clone(),
                GraphError::Cycle { witness }.to_string(),
            );
        }
    }

    for op in &inst.operations {
        if op.eligible.is_empty() {
            report.push(
                "empty eligible machine set",
                vec![op.id],
                format!("operation {} has no eligible machine", op.id),
            );
        }
        for (&k, &p) in &op.eligible {
            if !machine_ids.contains(&k) {
                report.push(
                    "unknown machine",
                    vec![op.id],
                    format!("operation {} lists machine {k}", op.id),
                );
            }
            if p == 0 {
                report.push(
                    "processing time must be positive",
                    vec![op.id],
                    format!("p[{}][{k}] = 0", op.id),
                );
            }
        }
        if op.theta_hundredths == 0 || op.theta_hundredths > 100 {
            report.push(
                "theta out of range",
                vec![op.id],
                format!("theta_hundredths = {}", op.theta_hundredths),
            );
        }
        if op.theta_hundredths != 100 && !has_successor.contains(&op.id) {
            report.push(
                "theta must be 1 without successors",
                vec![op.id],
                format!(
                    "operation {} has theta {}/100 but no successor",
                    op.id, op.theta_hundredths
                ),
            );
        }
        if let Some(fixed) = op.fixed {
            if op.eligible.len() != 1 || !op.eligible.contains_key(&fixed.machine) {
                report.push(
                    "fixed operation must have singleton machine set",
                    vec![op.id],
                    format!(
                        "operation {} is fixed on machine {} but eligible on {:?}",
                        op.id,
                        fixed.machine,
                        op.eligible.keys().collect::<Vec<_>>()
                    ),
                );
            }
        }
    }
    for mach in &inst.machines {
        for err in mach.calendar.problems() {
            report.push(
                "invalid unavailability window",
                vec![],
                format!("machine {}: {err}", mach.id),
            );
        }
        let eligible: BTreeSet<OpId> = inst.eligible_ops(mach.id).into_iter().collect();
        let first_keys: BTreeSet<OpId> = mach.setup_first.keys().copied().collect();
        if first_keys != eligible {
            let missing: Vec<OpId> = eligible.difference(&first_keys).copied().collect();
            let extra: Vec<OpId> = first_keys.difference(&eligible).copied().collect();
            report.push(
                "setup_first keys mismatch",
                missing.iter().chain(extra.iter()).copied().collect(),
                format!("machine {}: missing {missing:?}, extra {extra:?}", mach.id),
            );
        }
        match mach.setup_rule {
            Some(_) if !mach.setup_between.is_empty() => report.push(
                "setup_between and setup_rule both given",
                vec![],
                format!("machine {}", mach.id),
            ),
            Some(_) => {}
            None => {
                let mut bad = Vec::new();
                for &OpPair(i, j) in mach.setup_between.keys() {
                    if i == j || !eligible.contains(&i) || !eligible.contains(&j) {
                        bad.push(OpPair(i, j));
                    }
                }
                let n = eligible.len();
                let valid_keys = mach.setup_between.len() - bad.len();
                if !bad.is_empty() || valid_keys != n * n.saturating_sub(1) {
                    let missing: Vec<OpPair> = eligible
                        .iter()
                        .flat_map(|&i| eligible.iter().map(move |&j| OpPair(i, j)))
                        .filter(|p| p.0 != p.1 && !mach.setup_between.contains_key(p))
                        .take(5)
                        .collect();
                    report.push(
                        "setup_between keys mismatch",
                        vec![],
                        format!(
                            "machine {}: invalid keys {:?}, missing (first 5) {:?}",
                            mach.id,
                            bad.iter().map(ToString::to_string).collect::<Vec<_>>(),
                            missing.iter().map(ToString::to_string).collect::<Vec<_>>()
                        ),
                    );
                }
            }
        }
    }

    report
}
