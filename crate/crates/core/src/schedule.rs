use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::instance::{MachineId, OpId, Time};

/// Timing of one operation in a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledOp {
    pub id: OpId,
    pub machine: MachineId,
    pub setup_start: Time,
    pub setup_len: Time,
    pub start: Time,
    pub partial_completion: Time,
    pub completion: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Schedule {
    /// Ascending by operation id.
    pub operations: Vec<ScheduledOp>,
    /// Processing order on each machine.
    pub sequences: BTreeMap<MachineId, Vec<OpId>>,
}

impl Schedule {
    pub fn get(&self, id: OpId) -> Option<&ScheduledOp> {
        match self.operations.get((id as usize).wrapping_sub(1)) {
            Some(op) if op.id == id => Some(op),
            _ => self.operations.iter().find(|op| op.id == id),
        }
    }

    pub fn get_mut(&mut self, id: OpId) -> Option<&mut ScheduledOp> {
        let pos = match self.operations.get((id as usize).wrapping_sub(1)) {
            Some(op) if op.id == id => Some(id as usize - 1),
            _ => self.operations.iter().position(|op| op.id == id),
        };
        pos.map(move |p| &mut self.operations[p])
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Completion time of the last operation, 0 for an empty schedule.
pub fn makespan(schedule: &Schedule) -> Time {
    schedule
        .operations
        .iter()
        .map(|op| op.completion)
        .max()
        .unwrap_or(0)
}
