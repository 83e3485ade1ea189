use serde::{Deserialize, Serialize};

use crate::instance::OpId;

/// One broken rule, as reported by instance validation and the schedule
/// checker.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub op_ids: Vec<OpId>,
    pub detail: String,
}

impl Violation {
    pub fn new(rule: impl Into<String>, op_ids: Vec<OpId>, detail: impl Into<String>) -> Self {
        Violation {
            rule: rule.into(),
            op_ids,
            detail: detail.into(),
        }
    }
}

/// Ordered list of violations; empty means the subject is valid.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rule: impl Into<String>, op_ids: Vec<OpId>, detail: impl Into<String>) {
        self.violations.push(Violation::new(rule, op_ids, detail));
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}
