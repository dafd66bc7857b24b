//! A satisficing planner for finite-domain planning tasks.
//!
//! Tasks are read from a line-oriented text format ([`parser`]), landmarks
//! are extracted once ([`landmarks`]), and plans are found by a multi-queue
//! best-first search guided by a landmark-count heuristic and a
//! cost-sensitive FF heuristic ([`heuristics`], [`search`]).

pub mod dtg;
pub mod error;
pub mod harness;
pub mod heuristics;
pub mod landmarks;
pub mod parser;
pub mod search;
pub mod task;

pub use error::{ApplyError, ParseError, ScoreError, ValidationError};
pub use task::{Effect, Fact, Metric, Operator, PartialAssignment, State, Task, Variable};
