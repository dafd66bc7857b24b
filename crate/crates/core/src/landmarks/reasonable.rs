//! Reasonable and obedient-reasonable orderings, and cycle breaking.

use super::{find_cycle, LandmarkGraph, OrderingKind};
use crate::task::{Fact, Task};

/// Adds reasonable orderings, then obedient-reasonable orderings (chains may
/// also use the reasonable arcs), then removes arcs until the graph is
/// acyclic.
pub fn add_reasonable_orderings(mut graph: LandmarkGraph, task: &Task) -> LandmarkGraph {
    let found = candidates(&graph, task, |k| k.is_sound());
    for (l, lp) in found {
        graph.add_ordering(l, lp, OrderingKind::Reasonable);
    }
    let found = candidates(&graph, task, |k| k >= OrderingKind::Reasonable);
    for (l, lp) in found {
        graph.add_ordering(l, lp, OrderingKind::ObedientReasonable);
    }
    break_cycles(&mut graph);
    graph
}

/// Removes one arc per cycle until none is left. The weakest arc on a
/// cycle goes (obedient-reasonable before reasonable before natural), and
/// among equals the first one found on the cycle.
pub fn break_cycles(graph: &mut LandmarkGraph) {
    while let Some(cycle) = find_cycle(graph, &|_| true) {
        let (from, to) = cycle
            .iter()
            .copied()
            .min_by_key(|&(f, t)| graph.ordering(f, t))
            .expect("cycles have arcs");
        graph.remove_ordering(from, to);
    }
}

/// Pairs `(L, L')` of distinct fact landmarks meeting both the goal/chain
/// condition and the interference condition, computed on `graph` as given.
fn candidates(
    graph: &LandmarkGraph,
    task: &Task,
    chain_arc: impl Fn(OrderingKind) -> bool,
) -> Vec<(usize, usize)> {
    let facts: Vec<Option<Fact>> = graph.nodes().iter().map(|n| n.landmark.as_fact()).collect();
    let mut out = Vec::new();
    for (l, fl) in facts.iter().enumerate() {
        let Some(fl) = *fl else { continue };
        let reach = reachable_from(graph, l, &chain_arc);
        for (lp, flp) in facts.iter().enumerate() {
            let Some(flp) = *flp else { continue };
            if l == lp || (task.init.holds(fl) && task.init.holds(flp)) {
                continue;
            }
            if !goal_or_chain(graph, task, l, lp, flp, &reach, &chain_arc) {
                continue;
            }
            if interferes(graph, task, l, fl, flp) {
                out.push((l, lp));
            }
        }
    }
    out
}

fn reachable_from(
    graph: &LandmarkGraph,
    start: usize,
    chain_arc: &impl Fn(OrderingKind) -> bool,
) -> Vec<bool> {
    let mut seen = vec![false; graph.len()];
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for (&c, &k) in graph.children(v) {
            if chain_arc(k) && !seen[c] {
                seen[c] = true;
                stack.push(c);
            }
        }
    }
    seen
}

/// `L'` is a goal, or some `Ln` with `L' →gn Ln` closes a chain
/// `L → … → X → Ln` whose last link starts at `X ≠ L'`.
fn goal_or_chain(
    graph: &LandmarkGraph,
    task: &Task,
    l: usize,
    lp: usize,
    flp: Fact,
    reach: &[bool],
    chain_arc: &impl Fn(OrderingKind) -> bool,
) -> bool {
    if task.goal.contains(flp) {
        return true;
    }
    graph
        .children(lp)
        .iter()
        .filter(|(_, &k)| k == OrderingKind::GreedyNecessary)
        .any(|(&ln, _)| {
            reach[ln]
                && graph
                    .parents(ln)
                    .iter()
                    .any(|(&x, &k)| chain_arc(k) && x != lp && (x == l || reach[x]))
        })
}

/// Achieving `L'` first would force `L'` to be destroyed later on the way
/// to `L`.
fn interferes(graph: &LandmarkGraph, task: &Task, l: usize, fl: Fact, flp: Fact) -> bool {
    if task.inconsistent(fl, flp) {
        return true;
    }
    let mut achievers = task
        .operators
        .iter()
        .filter(|op| op.effects.iter().any(|e| e.fact() == fl))
        .peekable();
    if achievers.peek().is_some()
        && achievers.all(|op| {
            op.effects
                .iter()
                .any(|e| !e.is_conditional() && e.var != fl.var && task.inconsistent(e.fact(), flp))
        })
    {
        return true;
    }
    graph
        .parents(l)
        .iter()
        .filter(|(_, &k)| k == OrderingKind::GreedyNecessary)
        .any(|(&pp, _)| {
            graph
                .landmark(pp)
                .as_fact()
                .is_some_and(|f| task.inconsistent(f, flp))
        })
}
