//! Instance data: machines, operations, precedence arcs, setups and calendars.
//!
//! All time constants are non-negative integers. The JSON layout produced by
//! `serde` here is the interchange format used by the CLI and generator.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::calendar::Calendar;

/// Integer time unit.
pub type Time = u64;
/// Operation identifier, `1..=o`.
pub type OpId = u32;
/// Machine identifier, `1..=m`.
pub type MachineId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(rename = "m")]
    pub num_machines: u32,
    pub machines: Vec<Machine>,
    pub operations: Vec<Operation>,
    pub arcs: Vec<(OpId, OpId)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedStart {
    pub machine: MachineId,
    pub start: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operation {
    pub id: OpId,
    pub job: u32,
    /// Eligible machines and the processing time on each.
    pub eligible: BTreeMap<MachineId, Time>,
    /// Overlap fraction in hundredths; 100 means the whole operation must
    /// finish before a successor may start.
    pub theta_hundredths: u32,
    pub release: Time,
    pub fixed: Option<FixedStart>,
    pub size: u32,
    pub color: u32,
    pub varnish: u32,
}

impl Operation {
    pub fn processing_time(&self, machine: MachineId) -> Option<Time> {
        self.eligible.get(&machine).copied()
    }

    /// Units that must be processed before a successor may start,
    /// `ceil(theta * p)`.
    pub fn partial_time(&self, machine: MachineId) -> Option<Time> {
        self.processing_time(machine)
            .map(|p| partial_len(self.theta_hundredths, p))
    }
}

/// `ceil(theta_hundredths * p / 100)`.
pub fn partial_len(theta_hundredths: u32, p: Time) -> Time {
    (u64::from(theta_hundredths) * p).div_ceil(100)
}

/// Feature-driven setup rule: a compact alternative to listing every pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetupRule {
    /// Time when the next operation has a larger size.
    pub size_up: Time,
    /// Time when the next operation has a smaller size.
    pub size_down: Time,
    pub color: Time,
    pub varnish: Time,
}

impl SetupRule {
    pub fn between(&self, from: &Operation, to: &Operation) -> Time {
        self.between_features(
            (from.size, from.color, from.varnish),
            (to.size, to.color, to.varnish),
        )
    }

    /// Setup for `(size, color, varnish)` feature triples.
    pub fn between_features(&self, from: (u32, u32, u32), to: (u32, u32, u32)) -> Time {
        let size = match from.0.cmp(&to.0) {
            std::cmp::Ordering::Less => self.size_up,
            std::cmp::Ordering::Greater => self.size_down,
            std::cmp::Ordering::Equal => 0,
        };
        let color = if from.1 != to.1 { self.color } else { 0 };
        let varnish = if from.2 != to.2 { self.varnish } else { 0 };
        size + color + varnish
    }

    pub fn first(&self) -> Time {
        self.size_up.max(self.size_down) + self.color + self.varnish
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Machine {
    pub id: MachineId,
    #[serde(rename = "windows")]
    pub calendar: Calendar,
    pub setup_first: BTreeMap<OpId, Time>,
    #[serde(default)]
    pub setup_between: BTreeMap<OpPair, Time>,
    /// When present, `setup_between` is empty and in-between setups are
    /// derived from operation features.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setup_rule: Option<SetupRule>,
}

/// Ordered operation pair, serialized as the map key `"i,j"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpPair(pub OpId, pub OpId);

impl fmt::Display for OpPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0, self.1)
    }
}

impl FromStr for OpPair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| format!("expected \"i,j\", got {s:?}"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<OpId>()
                .map_err(|e| format!("bad operation id {t:?}: {e}"))
        };
        Ok(OpPair(parse(a)?, parse(b)?))
    }
}

impl Serialize for OpPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OpPair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Instance {
    pub fn num_operations(&self) -> usize {
        self.operations.len()
    }

    pub fn operation(&self, id: OpId) -> Option<&Operation> {
        // Valid instances keep operations at position id - 1; fall back to a scan.
        match self.operations.get((id as usize).wrapping_sub(1)) {
            Some(op) if op.id == id => Some(op),
            _ => self.operations.iter().find(|op| op.id == id),
        }
    }

    pub fn machine(&self, id: MachineId) -> Option<&Machine> {
        match self.machines.get((id as usize).wrapping_sub(1)) {
            Some(m) if m.id == id => Some(m),
            _ => self.machines.iter().find(|m| m.id == id),
        }
    }

    /// `B_k`: operations that may run on `machine`, ascending by id.
    pub fn eligible_ops(&self, machine: MachineId) -> Vec<OpId> {
        let mut ids: Vec<OpId> = self
            .operations
            .iter()
            .filter(|op| op.eligible.contains_key(&machine))
            .map(|op| op.id)
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Setup before `op` when it is the first operation on `machine`.
    pub fn setup_first(&self, machine: MachineId, op: OpId) -> Option<Time> {
        self.machine(machine)?.setup_first.get(&op).copied()
    }

    /// Setup before `to` when it immediately follows `from` on `machine`.
    pub fn setup_between(&self, machine: MachineId, from: OpId, to: OpId) -> Option<Time> {
        let mach = self.machine(machine)?;
        match &mach.setup_rule {
            Some(rule) => {
                if from == to {
                    return None;
                }
                let a = self.operation(from)?;
                let b = self.operation(to)?;
                if !a.eligible.contains_key(&machine) || !b.eligible.contains_key(&machine) {
                    return None;
                }
                Some(rule.between(a, b))
            }
            None => mach.setup_between.get(&OpPair(from, to)).copied(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
