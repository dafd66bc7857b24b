//! The landmark-count heuristic and its path-dependent landmark status.

use fixedbitset::FixedBitSet;

use super::{CostMode, EvalResult, Evaluator, RelaxedTask};
use crate::landmarks::{LandmarkGraph, OrderingKind};
use crate::task::{State, Task};

/// Landmarks accepted along the path that first reached a state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LandmarkStatus {
    accepted: FixedBitSet,
}

impl LandmarkStatus {
    pub fn accepted(&self) -> &FixedBitSet {
        &self.accepted
    }

    pub fn is_accepted(&self, id: usize) -> bool {
        self.accepted.contains(id)
    }

    pub fn num_accepted(&self) -> usize {
        self.accepted.count_ones(..)
    }

    /// Accepted landmark ids, ascending.
    pub fn ids(&self) -> Vec<usize> {
        self.accepted.ones().collect()
    }
}

/// Status of `state`. Without a parent (the initial state) the landmarks
/// true in `state` that have no incoming arcs are accepted; otherwise the
/// parent's landmarks plus those true in `state` whose predecessors were
/// all accepted in the parent.
pub fn lm_status_update(
    graph: &LandmarkGraph,
    parent: Option<&LandmarkStatus>,
    state: &State,
) -> LandmarkStatus {
    let mut accepted = match parent {
        Some(p) => p.accepted.clone(),
        None => FixedBitSet::with_capacity(graph.len()),
    };
    for id in 0..graph.len() {
        if accepted.contains(id) || !graph.landmark(id).holds_in(state) {
            continue;
        }
        let ready = match parent {
            None => graph.parents(id).is_empty(),
            Some(p) => graph.parents(id).keys().all(|&q| p.accepted.contains(q)),
        };
        if ready {
            accepted.insert(id);
        }
    }
    LandmarkStatus { accepted }
}

/// Landmarks still to be achieved: those not accepted, plus accepted ones
/// that are false in `state` and are goals or greedy-necessary predecessors
/// of a landmark not accepted yet. Ascending ids.
pub fn required_landmarks(
    graph: &LandmarkGraph,
    status: &LandmarkStatus,
    state: &State,
) -> Vec<usize> {
    (0..graph.len())
        .filter(|&id| {
            if !status.is_accepted(id) {
                return true;
            }
            if graph.landmark(id).holds_in(state) {
                return false;
            }
            graph.node(id).is_goal
                || graph
                    .children(id)
                    .iter()
                    .any(|(&c, &k)| k == OrderingKind::GreedyNecessary && !status.is_accepted(c))
        })
        .collect()
}

/// Heuristic value and tie key: the number of required landmarks, their
/// summed cost with the number as tie key, or the sum of both. Infinite if
/// a required landmark is false and can never be made true.
pub fn lm_count(
    graph: &LandmarkGraph,
    status: &LandmarkStatus,
    state: &State,
    mode: CostMode,
) -> (f64, u64) {
    let required = required_landmarks(graph, status, state);
    if required
        .iter()
        .any(|&id| graph.node(id).unreachable && !graph.landmark(id).holds_in(state))
    {
        return (f64::INFINITY, 0);
    }
    let n = required.len() as u64;
    let cost: u64 = required.iter().map(|&id| graph.node(id).cost).sum();
    match mode {
        CostMode::Ignore => (n as f64, 0),
        CostMode::Pure => (cost as f64, n),
        CostMode::PlusOne => ((cost + n) as f64, 0),
    }
}

fn acceptable(graph: &LandmarkGraph, status: &LandmarkStatus, id: usize) -> bool {
    graph.parents(id).keys().all(|&p| status.is_accepted(p))
}

/// Applicable operators that make a required, acceptable landmark true.
/// If there are none, the applicable operators of a relaxed plan to the
/// cheapest such landmark (lowest id on ties).
pub fn lm_preferred_ops(
    graph: &LandmarkGraph,
    status: &LandmarkStatus,
    state: &State,
    task: &Task,
    relaxed: &RelaxedTask,
) -> Vec<usize> {
    let targets: Vec<usize> = required_landmarks(graph, status, state)
        .into_iter()
        .filter(|&id| acceptable(graph, status, id) && !graph.landmark(id).holds_in(state))
        .collect();
    if targets.is_empty() {
        return Vec::new();
    }
    let direct: Vec<usize> = task
        .applicable_ops(state)
        .filter(|&o| {
            task.operators[o].effects.iter().any(|e| {
                e.fires_in(state)
                    && !state.holds(e.fact())
                    && targets
                        .iter()
                        .any(|&id| graph.landmark(id).contains(e.fact()))
            })
        })
        .collect();
    if !direct.is_empty() {
        return direct;
    }

    let expl = relaxed.explore(task, state);
    let mut nearest = None;
    for &id in &targets {
        for &f in graph.landmark(id).facts() {
            let fid = task.fact_id(f);
            let c = expl.fact_cost[fid];
            if !c.is_infinite() && nearest.is_none_or(|(best, _)| c < best) {
                nearest = Some((c, fid));
            }
        }
    }
    let Some((_, fact)) = nearest else {
        return Vec::new();
    };
    let mut ops: Vec<usize> = relaxed
        .relaxed_plan(&expl, &[fact])
        .unwrap_or_default()
        .into_iter()
        .filter(|&o| task.applicable(o, state))
        .collect();
    ops.sort_unstable();
    ops
}

/// The landmark-count heuristic. Needs the landmark status of the state.
pub struct LandmarkCountHeuristic<'a> {
    task: &'a Task,
    graph: &'a LandmarkGraph,
    mode: CostMode,
    relaxed: RelaxedTask,
}

impl<'a> LandmarkCountHeuristic<'a> {
    pub fn new(task: &'a Task, graph: &'a LandmarkGraph, mode: CostMode) -> Self {
        Self {
            task,
            graph,
            mode,
            relaxed: RelaxedTask::new(task, mode),
        }
    }

    pub fn graph(&self) -> &LandmarkGraph {
        self.graph
    }

    pub fn compute(&self, state: &State, status: &LandmarkStatus) -> EvalResult {
        let (h, tie) = lm_count(self.graph, status, state, self.mode);
        if h.is_infinite() {
            return EvalResult::dead_end();
        }
        let preferred = lm_preferred_ops(self.graph, status, state, self.task, &self.relaxed);
        EvalResult { h, tie, preferred }
    }
}

impl Evaluator for LandmarkCountHeuristic<'_> {
    fn evaluate(&mut self, state: &State, status: Option<&LandmarkStatus>) -> EvalResult {
        let status = status.expect("landmark heuristic needs a landmark status");
        self.compute(state, status)
    }
}
