//! Delete-relaxed cost propagation (additive) and relaxed plans.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use super::{CostMode, EvalResult, Evaluator, LandmarkStatus};
use crate::task::{State, Task};

/// A propagated cost: the mode-dependent value, then the number of
/// operators as a secondary component. Ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cost {
    pub value: u64,
    pub dist: u64,
}

impl Cost {
    pub const ZERO: Cost = Cost { value: 0, dist: 0 };
    pub const INFINITY: Cost = Cost {
        value: u64::MAX,
        dist: u64::MAX,
    };

    pub fn new(value: u64, dist: u64) -> Self {
        Self { value, dist }
    }

    pub fn is_infinite(self) -> bool {
        self == Cost::INFINITY
    }
}

/// Saturating; anything plus infinity is infinity.
impl std::ops::Add for Cost {
    type Output = Cost;

    fn add(self, other: Cost) -> Cost {
        if self.is_infinite() || other.is_infinite() {
            return Cost::INFINITY;
        }
        Cost {
            value: self.value.saturating_add(other.value),
            dist: self.dist.saturating_add(other.dist),
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}/{}", self.value, self.dist)
        }
    }
}

/// One effect of an operator, with the effect condition folded into the
/// precondition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnaryOperator {
    pub op: usize,
    /// Fact ids, deduplicated.
    pub pre: Vec<usize>,
    pub eff: usize,
    pub weight: Cost,
}

/// The delete relaxation of a task, split into unary operators.
#[derive(Clone, Debug)]
pub struct RelaxedTask {
    pub mode: CostMode,
    pub unary: Vec<UnaryOperator>,
    /// Unary operators having each fact (by id) in their precondition.
    pub consumers: Vec<Vec<usize>>,
    pub op_costs: Vec<u64>,
    num_facts: usize,
}

/// Per-state result of the forward propagation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelaxedExploration {
    /// Indexed by fact id.
    pub fact_cost: Vec<Cost>,
    /// Unary operator attaining the cost; `None` for facts true in the state
    /// and for unreachable facts.
    pub best_support: Vec<Option<usize>>,
}

impl RelaxedTask {
    pub fn new(task: &Task, mode: CostMode) -> Self {
        let mut unary = Vec::new();
        for (i, op) in task.operators.iter().enumerate() {
            for e in &op.effects {
                let mut pre: Vec<usize> = op
                    .extended_precondition(e)
                    .into_iter()
                    .map(|f| task.fact_id(f))
                    .collect();
                pre.sort_unstable();
                pre.dedup();
                unary.push(UnaryOperator {
                    op: i,
                    pre,
                    eff: task.fact_id(e.fact()),
                    weight: mode.weight(task.cost(i)),
                });
            }
        }
        let mut consumers = vec![Vec::new(); task.num_facts()];
        for (u, op) in unary.iter().enumerate() {
            for &f in &op.pre {
                consumers[f].push(u);
            }
        }
        Self {
            mode,
            unary,
            consumers,
            op_costs: (0..task.operators.len()).map(|o| task.cost(o)).collect(),
            num_facts: task.num_facts(),
        }
    }

    /// Cheapest-first propagation from the facts of `state`. An operator
    /// costs its weight plus the sum of its precondition costs; ties between
    /// supports go to the lowest unary index.
    pub fn explore(&self, task: &Task, state: &State) -> RelaxedExploration {
        let mut fact_cost = vec![Cost::INFINITY; self.num_facts];
        let mut best_support: Vec<Option<usize>> = vec![None; self.num_facts];
        let mut done = vec![false; self.num_facts];
        let mut unsatisfied: Vec<usize> = self.unary.iter().map(|u| u.pre.len()).collect();
        let mut op_cost: Vec<Cost> = self.unary.iter().map(|u| u.weight).collect();
        let mut heap = BinaryHeap::new();

        for (var, &val) in state.values().iter().enumerate() {
            let f = task.fact_id(crate::task::Fact::new(var, val));
            fact_cost[f] = Cost::ZERO;
            heap.push(Reverse((Cost::ZERO, f)));
        }
        let relax = |u: usize,
                     cost: Cost,
                     fact_cost: &mut Vec<Cost>,
                     best_support: &mut Vec<Option<usize>>,
                     heap: &mut BinaryHeap<Reverse<(Cost, usize)>>| {
            let e = self.unary[u].eff;
            if cost < fact_cost[e] {
                fact_cost[e] = cost;
                best_support[e] = Some(u);
                heap.push(Reverse((cost, e)));
            } else if cost == fact_cost[e] && best_support[e].is_some_and(|s| u < s) {
                best_support[e] = Some(u);
            }
        };
        for (u, op) in self.unary.iter().enumerate() {
            if op.pre.is_empty() {
                relax(u, op.weight, &mut fact_cost, &mut best_support, &mut heap);
            }
        }
        while let Some(Reverse((c, f))) = heap.pop() {
            if done[f] || c > fact_cost[f] {
                continue;
            }
            done[f] = true;
            for &u in &self.consumers[f] {
                op_cost[u] = op_cost[u] + c;
                unsatisfied[u] -= 1;
                if unsatisfied[u] == 0 {
                    relax(u, op_cost[u], &mut fact_cost, &mut best_support, &mut heap);
                }
            }
        }
        RelaxedExploration {
            fact_cost,
            best_support,
        }
    }

    /// Operators (original indices, ascending) of the relaxed plan for
    /// `targets` built from best supports. Applied repeatedly under
    /// delete-free semantics they reach every target. `None` if some target
    /// is unreachable.
    pub fn relaxed_plan(&self, expl: &RelaxedExploration, targets: &[usize]) -> Option<Vec<usize>> {
        if targets.iter().any(|&f| expl.fact_cost[f].is_infinite()) {
            return None;
        }
        let mut marked = vec![false; self.num_facts];
        let mut chosen = vec![false; self.op_costs.len()];
        let mut stack: Vec<usize> = targets.to_vec();
        while let Some(f) = stack.pop() {
            if std::mem::replace(&mut marked[f], true) {
                continue;
            }
            let Some(u) = expl.best_support[f] else {
                continue;
            };
            let unary = &self.unary[u];
            chosen[unary.op] = true;
            stack.extend(unary.pre.iter().copied().filter(|&p| !marked[p]));
        }
        Some((0..chosen.len()).filter(|&o| chosen[o]).collect())
    }

    /// Heuristic value and tie key of a relaxed plan under the mode.
    pub fn plan_value(&self, plan: &[usize]) -> (f64, u64) {
        let len = plan.len() as u64;
        match self.mode {
            CostMode::Ignore => (len as f64, 0),
            CostMode::Pure => (
                plan.iter().map(|&o| self.op_costs[o]).sum::<u64>() as f64,
                len,
            ),
            CostMode::PlusOne => (
                plan.iter().map(|&o| self.op_costs[o] + 1).sum::<u64>() as f64,
                0,
            ),
        }
    }
}

/// The FF heuristic on top of additive cost propagation. Preferred
/// operators are the relaxed plan's operators applicable in the state.
pub struct FfHeuristic<'a> {
    task: &'a Task,
    relaxed: RelaxedTask,
    goal: Vec<usize>,
}

impl<'a> FfHeuristic<'a> {
    pub fn new(task: &'a Task, mode: CostMode) -> Self {
        Self {
            task,
            relaxed: RelaxedTask::new(task, mode),
            goal: task.goal.iter().map(|f| task.fact_id(*f)).collect(),
        }
    }

    pub fn relaxed(&self) -> &RelaxedTask {
        &self.relaxed
    }

    pub fn compute(&self, state: &State) -> EvalResult {
        let expl = self.relaxed.explore(self.task, state);
        let Some(plan) = self.relaxed.relaxed_plan(&expl, &self.goal) else {
            return EvalResult::dead_end();
        };
        let (h, tie) = self.relaxed.plan_value(&plan);
        let mut preferred: Vec<usize> = plan
            .into_iter()
            .filter(|&o| self.task.applicable(o, state))
            .collect();
        preferred.sort_unstable();
        EvalResult { h, tie, preferred }
    }
}

impl Evaluator for FfHeuristic<'_> {
    fn evaluate(&mut self, state: &State, _status: Option<&LandmarkStatus>) -> EvalResult {
        self.compute(state)
    }
}
