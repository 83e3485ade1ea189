//! Precedence graph helpers.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::instance::{Instance, OpId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("precedence arcs contain a cycle: {}", fmt_cycle(.witness))]
    Cycle { witness: Vec<OpId> },
    #[error("arc ({0}, {1}) references an unknown operation")]
    UnknownOperation(OpId, OpId),
}

fn fmt_cycle(ids: &[OpId]) -> String {
    let mut parts: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
    if let Some(first) = ids.first() {
        parts.push(first.to_string());
    }
    parts.join(" -> ")
}

/// Topological order of all operations, ready nodes taken by ascending id.
pub fn topological_order(inst: &Instance) -> Result<Vec<OpId>, GraphError> {
    let ids: Vec<OpId> = inst.operations.iter().map(|op| op.id).collect();
    order_ids(&ids, &inst.arcs)
}

pub(crate) fn order_ids(ids: &[OpId], arcs: &[(OpId, OpId)]) -> Result<Vec<OpId>, GraphError> {
    let mut indegree: BTreeMap<OpId, usize> = ids.iter().map(|&i| (i, 0)).collect();
    let mut succs: BTreeMap<OpId, Vec<OpId>> = BTreeMap::new();
    for &(a, b) in arcs {
        if !indegree.contains_key(&a) || !indegree.contains_key(&b) {
            return Err(GraphError::UnknownOperation(a, b));
        }
        *indegree.get_mut(&b).unwrap() += 1;
        succs.entry(a).or_default().push(b);
    }
    let mut ready: BinaryHeap<Reverse<OpId>> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&i, _)| Reverse(i))
        .collect();
    let mut order = Vec::with_capacity(ids.len());
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &j in succs.get(&i).map(Vec::as_slice).unwrap_or(&[]) {
            let d = indegree.get_mut(&j).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.push(Reverse(j));
            }
        }
    }
    if order.len() < indegree.len() {
        let remaining: Vec<OpId> = indegree
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&i, _)| i)
            .collect();
        return Err(GraphError::Cycle {
            witness: find_cycle(&remaining, &succs),
        });
    }
    Ok(order)
}

/// Every node in `remaining` has an incoming arc from another remaining
/// node, so walking backwards along such arcs must revisit a node.
fn find_cycle(remaining: &[OpId], succs: &BTreeMap<OpId, Vec<OpId>>) -> Vec<OpId> {
    let in_set = |i: OpId| remaining.binary_search(&i).is_ok();
    let mut preds: BTreeMap<OpId, OpId> = BTreeMap::new();
    for (&a, bs) in succs {
        if !in_set(a) {
            continue;
        }
        for &b in bs {
            if in_set(b) {
                preds.entry(b).or_insert(a);
            }
        }
    }
    let mut path = vec![remaining[0]];
    let mut seen: BTreeMap<OpId, usize> = BTreeMap::from([(remaining[0], 0)]);
    loop {
        let cur = *path.last().unwrap();
        let prev = preds[&cur];
        if let Some(&pos) = seen.get(&prev) {
            let mut cycle: Vec<OpId> = path[pos..].to_vec();
            cycle.reverse();
            return cycle;
        }
        seen.insert(prev, path.len());
        path.push(prev);
    }
}
