//! Landmark-count and FF/add heuristics.

mod landmark_count;
mod relaxed;

use std::fmt;
use std::str::FromStr;

use crate::task::State;

pub use landmark_count::{
    lm_count, lm_preferred_ops, lm_status_update, required_landmarks, LandmarkCountHeuristic,
    LandmarkStatus,
};
pub use relaxed::{Cost, FfHeuristic, RelaxedExploration, RelaxedTask, UnaryOperator};

/// How operator costs enter heuristic estimates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CostMode {
    /// Every operator counts 1.
    Ignore,
    /// Operator cost, with distance as a tie-breaker.
    Pure,
    /// Operator cost plus 1.
    #[default]
    PlusOne,
}

impl CostMode {
    pub const ALL: [CostMode; 3] = [CostMode::Ignore, CostMode::Pure, CostMode::PlusOne];

    pub fn as_str(self) -> &'static str {
        match self {
            CostMode::Ignore => "ignore",
            CostMode::Pure => "pure",
            CostMode::PlusOne => "plus-one",
        }
    }

    /// Weight of one operator of cost `c` as (value, distance).
    pub fn weight(self, c: u64) -> Cost {
        match self {
            CostMode::Ignore => Cost::new(1, 0),
            CostMode::Pure => Cost::new(c, 1),
            CostMode::PlusOne => Cost::new(c.saturating_add(1), 0),
        }
    }
}

impl fmt::Display for CostMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CostMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ignore" => Ok(CostMode::Ignore),
            "pure" => Ok(CostMode::Pure),
            "plus-one" | "plus_one" => Ok(CostMode::PlusOne),
            _ => Err(format!(
                "unknown cost mode `{s}` (expected ignore, pure or plus-one)"
            )),
        }
    }
}

/// A heuristic value and the operators the heuristic prefers.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    /// `f64::INFINITY` marks a dead end.
    pub h: f64,
    /// Secondary key compared when `h` values are equal.
    pub tie: u64,
    /// Operator indices, ascending.
    pub preferred: Vec<usize>,
}

impl EvalResult {
    pub fn dead_end() -> Self {
        Self {
            h: f64::INFINITY,
            tie: u64::MAX,
            preferred: Vec::new(),
        }
    }

    pub fn is_dead_end(&self) -> bool {
        self.h.is_infinite()
    }
}

/// A state evaluator as seen by the search. `status` is the landmark status
/// stored with the state when the search tracks landmarks.
pub trait Evaluator {
    fn evaluate(&mut self, state: &State, status: Option<&LandmarkStatus>) -> EvalResult;
}
