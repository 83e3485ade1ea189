//! Mixed-integer model of the problem with explicit auxiliary variables,
//! LP text export and an evaluator that maps a schedule onto the model.
//!
//! Variable names, one prefix per symbol:
//!
//! | prefix | meaning |
//! |--------|---------|
//! | `x_i_k` | operation `i` runs on machine `k` |
//! | `yI_i_j_k` | `i` immediately precedes `j` on `k` |
//! | `s_i`, `c_i`, `cb_i` | start, completion, partial completion |
//! | `pp_i`, `ppb_i` | processing time and partial processing time |
//! | `u_i`, `ub_i` | unavailable time inside `[s, c]` and `[s, cb]` |
//! | `v_i_k_l`, `w_i_k_l`, `wb_i_k_l` | window `l` lies left of `s`, `c`, `cb` |
//! | `xih_j_k`, `xib_j_k`, `xi_j` | setup time candidates and the setup time |
//! | `Cmax` | makespan |

mod build;
mod evaluate;
mod lp;

use std::collections::HashMap;
use std::fmt;

pub use build::build_model;
pub use evaluate::{evaluate_schedule, Evaluation, RowViolation};
pub use lp::emit_lp;

/// Absolute optimality gap for integer objectives.
pub const EPS_ABS: f64 = 1.0 - 1e-6;
/// Relative optimality gap.
pub const EPS_REL: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: i64,
    /// `None` is unbounded above.
    pub upper: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

impl Sense {
    pub fn holds(self, lhs: i128, rhs: i128) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Eq => lhs == rhs,
            Sense::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    /// `(variable index, coefficient)`, no repeated variable, no zero coefficient.
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MilpModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Index of the minimized variable.
    pub objective: usize,
    index: HashMap<String, usize>,
}

impl MilpModel {
    pub fn var(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn binaries(&self) -> impl Iterator<Item = &Variable> {
        self.variables.iter().filter(|v| v.kind == VarKind::Binary)
    }

    pub fn num_binaries(&self) -> usize {
        self.binaries().count()
    }

    pub(crate) fn add_var(&mut self, name: String, kind: VarKind) -> usize {
        let idx = self.variables.len();
        let (lower, upper) = match kind {
            VarKind::Binary => (0, Some(1)),
            VarKind::Continuous => (0, None),
        };
        let prev = self.index.insert(name.clone(), idx);
        debug_assert!(prev.is_none(), "duplicate variable {name}");
        self.variables.push(Variable {
            name,
            kind,
            lower,
            upper,
        });
        idx
    }

    /// Adds a row after merging repeated variables; rows left without terms
    /// are dropped.
    pub(crate) fn add_row(&mut self, name: String, terms: &[(usize, i64)], sense: Sense, rhs: i64) {
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(terms.len());
        for &(v, a) in terms {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, b)) => *b += a,
                None => merged.push((v, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0);
        if merged.is_empty() {
            return;
        }
        self.constraints.push(Constraint {
            name,
            terms: merged,
            sense,
            rhs,
        });
    }
}
