//! Scheduling for an online printing shop: a flexible job shop with DAG
//! precedences, partial overlap, resumable operations under machine
//! unavailability, sequence-dependent setups, release times and fixed
//! operations.
//!
//! * [`instance`], [`calendar`], [`schedule`]: data model and JSON format.
//! * [`validate`], [`graph`], [`bigm`]: structural checks and derived constants.
//! * [`timing`]: placement, semi-active decoding and the schedule checker.
//! * [`generator`]: seeded random instances and class presets.
//! * [`milp`]: the mixed-integer model, LP export and a schedule evaluator.
//! * [`solvers`]: brute force, branch and bound, and a greedy list scheduler.

pub mod bigm;
pub mod calendar;
pub mod generator;
pub mod graph;
pub mod instance;
pub mod milp;
pub mod problem;
pub mod report;
pub mod schedule;
pub mod solvers;
pub mod timing;
pub mod validate;

pub use bigm::{big_m_constants, BigM};
pub use calendar::{Calendar, CalendarError, Window};
pub use graph::{topological_order, GraphError};
pub use instance::{FixedStart, Instance, Machine, MachineId, OpId, OpPair, Operation, SetupRule, Time};
pub use problem::{InvalidInstance, Problem};
pub use report::{Report, Violation};
pub use schedule::{makespan, Schedule, ScheduledOp};
pub use timing::{check_schedule, completion_time, decode, earliest_start, Decision, DecodeError, Placement, PlacementQuery};
pub use validate::validate_instance;
