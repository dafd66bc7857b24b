//! Restarting anytime search: greedy search first, then fresh weighted A*
//! runs with decreasing weights, pruned by the incumbent's cost.

use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Duration;

use super::engine::run_search;
use super::{Budget, Plan, SearchConfig, SearchKind, SearchOutcome, SearchStats, DEFAULT_BOOST};
use crate::heuristics::{CostMode, Evaluator, FfHeuristic, LandmarkCountHeuristic};
use crate::landmarks::LandmarkGraph;
use crate::task::Task;

#[derive(Clone, Debug, PartialEq)]
pub struct AnytimeConfig {
    /// Weights of the weighted A* runs; the last one repeats.
    pub weights: Vec<f64>,
    pub boost: u64,
    pub time_budget: Option<Duration>,
    pub cost_mode: CostMode,
    pub use_landmarks: bool,
}

impl Default for AnytimeConfig {
    fn default() -> Self {
        Self {
            weights: vec![10.0, 5.0, 3.0, 2.0, 1.0],
            boost: DEFAULT_BOOST,
            time_budget: None,
            cost_mode: CostMode::PlusOne,
            use_landmarks: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("at least one weight is required")]
    NoWeights,
    #[error("weight {0} is below 1")]
    WeightBelowOne(f64),
    #[error("weights must strictly decrease ({0} is followed by {1})")]
    NotDecreasing(f64, f64),
}

impl AnytimeConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.weights.is_empty() {
            return Err(ConfigError::NoWeights);
        }
        if let Some(&w) = self.weights.iter().find(|&&w| w.is_nan() || w < 1.0) {
            return Err(ConfigError::WeightBelowOne(w));
        }
        if let Some(pair) = self.weights.windows(2).find(|p| p[1] >= p[0]) {
            return Err(ConfigError::NotDecreasing(pair[0], pair[1]));
        }
        Ok(())
    }

    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            cost_mode: self.cost_mode,
            use_landmarks: self.use_landmarks,
            boost: self.boost,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnytimeOutcome {
    /// The greedy search exhausted the state space.
    Unsolvable,
    /// A bounded search exhausted its space: no cheaper plan exists.
    Exhausted,
    /// The budget ran out.
    Interrupted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnytimeResult {
    pub best: Option<Plan>,
    pub outcome: AnytimeOutcome,
    /// One entry per search run, greedy first.
    pub runs: Vec<SearchStats>,
}

/// The anytime loop over caller-supplied evaluators. `emit` sees every
/// improving plan as soon as it is found.
pub fn anytime_search(
    task: &Task,
    graph: Option<&LandmarkGraph>,
    evaluators: &mut [&mut dyn Evaluator],
    weights: &[f64],
    boost: u64,
    budget: &Budget,
    mut emit: impl FnMut(&Plan),
) -> AnytimeResult {
    let mut runs = Vec::new();
    let first = run_search(task, graph, evaluators, SearchKind::Greedy, boost, budget);
    runs.push(first.stats);
    let mut best = match first.outcome {
        SearchOutcome::Solved(plan) => plan,
        SearchOutcome::Exhausted => {
            return AnytimeResult {
                best: None,
                outcome: AnytimeOutcome::Unsolvable,
                runs,
            }
        }
        SearchOutcome::Interrupted => {
            return AnytimeResult {
                best: None,
                outcome: AnytimeOutcome::Interrupted,
                runs,
            }
        }
    };
    emit(&best);

    let mut next = 0;
    loop {
        let weight = weights[next.min(weights.len() - 1)];
        next += 1;
        let kind = SearchKind::Weighted {
            weight,
            bound: Some(best.cost),
        };
        let run = run_search(task, graph, evaluators, kind, boost, budget);
        runs.push(run.stats);
        let outcome = match run.outcome {
            SearchOutcome::Solved(plan) => {
                debug_assert!(plan.cost < best.cost);
                emit(&plan);
                best = plan;
                continue;
            }
            SearchOutcome::Exhausted => AnytimeOutcome::Exhausted,
            SearchOutcome::Interrupted => AnytimeOutcome::Interrupted,
        };
        return AnytimeResult {
            best: Some(best),
            outcome,
            runs,
        };
    }
}

/// The anytime loop with the FF heuristic and, if enabled, the
/// landmark-count heuristic on `graph`.
pub fn anytime_plan(
    task: &Task,
    graph: Option<&LandmarkGraph>,
    config: &AnytimeConfig,
    cancel: Option<Arc<AtomicBool>>,
    emit: impl FnMut(&Plan),
) -> Result<AnytimeResult, ConfigError> {
    config.validate()?;
    let mut budget = config
        .time_budget
        .map_or_else(Budget::unlimited, Budget::with_time_limit);
    budget.cancel = cancel;
    let mut ff = FfHeuristic::new(task, config.cost_mode);
    let result = match graph.filter(|_| config.use_landmarks) {
        Some(graph) => {
            let mut lm = LandmarkCountHeuristic::new(task, graph, config.cost_mode);
            let mut evals: [&mut dyn Evaluator; 2] = [&mut ff, &mut lm];
            anytime_search(
                task,
                Some(graph),
                &mut evals,
                &config.weights,
                config.boost,
                &budget,
                emit,
            )
        }
        None => {
            let mut evals: [&mut dyn Evaluator; 1] = [&mut ff];
            anytime_search(
                task,
                None,
                &mut evals,
                &config.weights,
                config.boost,
                &budget,
                emit,
            )
        }
    };
    Ok(result)
}
