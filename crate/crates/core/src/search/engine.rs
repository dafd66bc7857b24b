//! The search loop shared by greedy best-first search and weighted A*.

use std::collections::{BTreeSet, HashMap};

use super::{Budget, OpenQueues, Plan, SearchOutcome, SearchResult, SearchStats, DEFAULT_BOOST};
use crate::heuristics::{
    lm_status_update, CostMode, EvalResult, Evaluator, FfHeuristic, LandmarkCountHeuristic,
    LandmarkStatus,
};
use crate::landmarks::LandmarkGraph;
use crate::task::{State, Task};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SearchKind {
    /// Keys are the parent's heuristic value; states are expanded once.
    Greedy,
    /// Keys are `weight · h(parent) + g`; states are reopened on cheaper
    /// paths and states with `g ≥ bound` are pruned.
    Weighted { weight: f64, bound: Option<u64> },
}

/// Heuristic settings for [`greedy_bfs`] and [`weighted_astar`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub cost_mode: CostMode,
    pub use_landmarks: bool,
    pub boost: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            cost_mode: CostMode::PlusOne,
            use_landmarks: true,
            boost: DEFAULT_BOOST,
        }
    }
}

struct Node {
    state: State,
    parent: Option<(usize, usize)>,
    g: u64,
    status: Option<LandmarkStatus>,
    eval: Option<Vec<EvalResult>>,
}

struct Engine<'t, 'e, 'h> {
    task: &'t Task,
    graph: Option<&'t LandmarkGraph>,
    evaluators: &'e mut [&'h mut dyn Evaluator],
    kind: SearchKind,
    boost: u64,
    open: OpenQueues,
    nodes: Vec<Node>,
    index: HashMap<State, usize>,
    best_seen: Vec<f64>,
    stats: SearchStats,
}

impl Engine<'_, '_, '_> {
    fn bound(&self) -> Option<u64> {
        match self.kind {
            SearchKind::Greedy => None,
            SearchKind::Weighted { bound, .. } => bound,
        }
    }

    fn pruned(&self, g: u64) -> bool {
        self.bound().is_some_and(|b| g >= b)
    }

    fn trace(&self, mut id: usize) -> Plan {
        let cost = self.nodes[id].g;
        let mut ops = Vec::new();
        while let Some((parent, op)) = self.nodes[id].parent {
            ops.push(op);
            id = parent;
        }
        ops.reverse();
        Plan { ops, cost }
    }

    /// Closes and expands a popped state. Returns a plan if it is a goal.
    fn process(&mut self, state: State, link: Option<(usize, usize)>, g: u64) -> Option<Plan> {
        if self.pruned(g) {
            return None;
        }
        let id = match self.index.get(&state) {
            Some(&id) => {
                let reopen =
                    matches!(self.kind, SearchKind::Weighted { .. }) && g < self.nodes[id].g;
                if !reopen {
                    return None;
                }
                // The landmark status from the first path is kept.
                let node = &mut self.nodes[id];
                node.g = g;
                node.parent = link;
                self.stats.reopened += 1;
                id
            }
            None => {
                let status = self.graph.map(|graph| {
                    let parent = link.and_then(|(p, _)| self.nodes[p].status.as_ref());
                    lm_status_update(graph, parent, &state)
                });
                if status.is_some() {
                    self.stats.statuses_built += 1;
                }
                let id = self.nodes.len();
                self.index.insert(state.clone(), id);
                self.nodes.push(Node {
                    state,
                    parent: link,
                    g,
                    status,
                    eval: None,
                });
                id
            }
        };

        if self.task.is_goal(&self.nodes[id].state) {
            return Some(self.trace(id));
        }

        if self.nodes[id].eval.is_none() {
            let node = &self.nodes[id];
            let results: Vec<EvalResult> = self
                .evaluators
                .iter_mut()
                .map(|e| e.evaluate(&node.state, node.status.as_ref()))
                .collect();
            self.stats.evaluations += 1;
            self.nodes[id].eval = Some(results);
        }
        self.stats.expansions += 1;
        let results = self.nodes[id].eval.clone().unwrap_or_default();
        if results.iter().any(EvalResult::is_dead_end) {
            return None;
        }

        let mut progress = false;
        for (best, r) in self.best_seen.iter_mut().zip(&results) {
            if r.h < *best {
                *best = r.h;
                progress = true;
            }
        }
        if progress {
            self.open.boost(self.boost);
            self.stats.progress_events += 1;
        }

        let preferred: BTreeSet<usize> = results
            .iter()
            .flat_map(|r| r.preferred.iter().copied())
            .collect();
        let state = self.nodes[id].state.clone();
        for op in self.task.applicable_ops(&state) {
            let op_cost = self.task.cost(op);
            let child_g = g.saturating_add(op_cost);
            if self.pruned(child_g) {
                continue;
            }
            self.stats.generated += 1;
            let is_preferred = preferred.contains(&op);
            for (i, r) in results.iter().enumerate() {
                let key = match self.kind {
                    SearchKind::Greedy => r.h,
                    SearchKind::Weighted { weight, .. } => weight * r.h + child_g as f64,
                };
                self.open
                    .push(OpenQueues::regular(i), key, r.tie, op_cost, id, op);
                if is_preferred {
                    self.open
                        .push(OpenQueues::preferred(i), key, r.tie, op_cost, id, op);
                }
            }
        }
        None
    }

    fn run(mut self, budget: &Budget) -> SearchResult {
        let mut current = Some((self.task.init.clone(), None, 0u64));
        let outcome = loop {
            if let Some((state, link, g)) = current.take() {
                if let Some(plan) = self.process(state, link, g) {
                    break SearchOutcome::Solved(plan);
                }
            }
            if budget.exceeded() {
                break SearchOutcome::Interrupted;
            }
            let Some((_, entry)) = self.open.pop() else {
                break SearchOutcome::Exhausted;
            };
            let parent = &self.nodes[entry.parent];
            let state = self.task.operators[entry.op].apply_unchecked(&parent.state);
            let g = parent.g.saturating_add(self.task.cost(entry.op));
            current = Some((state, Some((entry.parent, entry.op)), g));
        };
        self.stats.boost_added = self.open.boost_added().to_vec();
        self.stats.served_max_priority = self.open.served_max_priority();
        SearchResult {
            outcome,
            stats: self.stats,
        }
    }
}

/// Runs one search with the given evaluators, in queue order. Landmark
/// statuses are tracked (and handed to the evaluators) only if `graph` is
/// given.
pub fn run_search(
    task: &Task,
    graph: Option<&LandmarkGraph>,
    evaluators: &mut [&mut dyn Evaluator],
    kind: SearchKind,
    boost: u64,
    budget: &Budget,
) -> SearchResult {
    let k = evaluators.len();
    Engine {
        task,
        graph,
        evaluators,
        kind,
        boost,
        open: OpenQueues::new(k),
        nodes: Vec::new(),
        index: HashMap::new(),
        best_seen: vec![f64::INFINITY; k],
        stats: SearchStats {
            served_max_priority: true,
            ..SearchStats::default()
        },
    }
    .run(budget)
}

fn run_with_heuristics(
    task: &Task,
    graph: Option<&LandmarkGraph>,
    config: &SearchConfig,
    kind: SearchKind,
    budget: &Budget,
) -> SearchResult {
    let mut ff = FfHeuristic::new(task, config.cost_mode);
    match graph.filter(|_| config.use_landmarks) {
        Some(graph) => {
            let mut lm = LandmarkCountHeuristic::new(task, graph, config.cost_mode);
            run_search(
                task,
                Some(graph),
                &mut [&mut ff, &mut lm],
                kind,
                config.boost,
                budget,
            )
        }
        None => run_search(task, None, &mut [&mut ff], kind, config.boost, budget),
    }
}

/// Greedy best-first search with the FF heuristic and, if a graph is given
/// and enabled in `config`, the landmark-count heuristic.
pub fn greedy_bfs(
    task: &Task,
    graph: Option<&LandmarkGraph>,
    config: &SearchConfig,
    budget: &Budget,
) -> SearchResult {
    run_with_heuristics(task, graph, config, SearchKind::Greedy, budget)
}

/// Weighted A* with the same heuristics as [`greedy_bfs`]. Panics if
/// `weight < 1`.
pub fn weighted_astar(
    task: &Task,
    graph: Option<&LandmarkGraph>,
    weight: f64,
    bound: Option<u64>,
    config: &SearchConfig,
    budget: &Budget,
) -> SearchResult {
    assert!(weight >= 1.0, "weight must be at least 1");
    run_with_heuristics(
        task,
        graph,
        config,
        SearchKind::Weighted { weight, bound },
        budget,
    )
}
