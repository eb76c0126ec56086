//! Fixed points of nonexpansive mappings by perturbed iteration.

mod iterate;
pub mod mapping;
pub mod schedule;
pub mod trace;

pub use iterate::{
    implicit_step, nearest_fixed_point_residual, run_explicit, run_implicit, FixedSetSource, RunOptions,
};
pub use mapping::{apply_mapping, FixedPoints, Mapping};
pub use schedule::{
    validate_implicit_schedule, validate_schedules, ConditionCheck, ImplicitReport, Law, Schedule, ScheduleReport, Verdict,
};
pub use trace::{Algorithm, IterationTrace, TerminalStatus, TraceRow};
