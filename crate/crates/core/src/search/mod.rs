//! Best-first search with deferred evaluation, preferred-operator queues
//! and a restarting anytime weighted A* loop.

mod anytime;
mod engine;
mod open;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::task::Task;

pub use anytime::{
    anytime_plan, anytime_search, AnytimeConfig, AnytimeOutcome, AnytimeResult, ConfigError,
};
pub use engine::{greedy_bfs, run_search, weighted_astar, SearchConfig, SearchKind};
pub use open::{OpenQueues, QueueEntry};

/// Default priority increment for preferred queues on progress.
pub const DEFAULT_BOOST: u64 = 1000;

/// A sequence of operator indices and its cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub ops: Vec<usize>,
    pub cost: u64,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn names<'t>(&self, task: &'t Task) -> Vec<&'t str> {
        self.ops
            .iter()
            .map(|&o| task.operators[o].name.as_str())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Solved(Plan),
    /// Every reachable state (within the cost bound) was expanded.
    Exhausted,
    /// The deadline passed or the cancel flag was raised.
    Interrupted,
}

/// Counters kept by one search run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expansions: u64,
    /// States evaluated (once per state, by all heuristics together).
    pub evaluations: u64,
    pub generated: u64,
    pub reopened: u64,
    /// Expansions on which some heuristic improved its best value.
    pub progress_events: u64,
    /// Total boost added to each queue, in queue order.
    pub boost_added: Vec<u64>,
    /// False if a pop ever served a queue whose priority was not maximal.
    pub served_max_priority: bool,
    pub statuses_built: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
}

/// When a search must give up: a wall-clock deadline and/or a flag set from
/// another thread.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_time_limit(limit: Duration) -> Self {
        Self {
            deadline: Instant::now().checked_add(limit),
            cancel: None,
        }
    }

    pub fn exceeded(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
            || self
                .cancel
                .as_ref()
                .is_some_and(|c| c.load(Ordering::Relaxed))
    }
}
