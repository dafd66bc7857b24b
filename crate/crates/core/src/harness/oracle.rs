//! Exhaustive checks of landmark claims on small tasks. Searching the
//! states (with a phase where needed) breadth-first up to a depth bound
//! finds a counterexample exactly when enumerating all plans up to that
//! length would.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::hash::Hash;

use crate::landmarks::Landmark;
use crate::task::{State, Task};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Some plan exists within the bound and none contradicts the claim.
    Holds,
    /// A plan contradicting the claim.
    Violated(Vec<usize>),
    /// No plan within the bound.
    Inconclusive,
}

/// Breadth-first search over nodes derived from states. `step` maps a node
/// and successor state to the successor node (or prunes it); returns the
/// operators of a shortest path to a node accepted by `done`.
fn bounded_bfs<N: Clone + Eq + Hash>(
    task: &Task,
    start: Option<N>,
    state_of: impl Fn(&N) -> &State,
    step: impl Fn(&N, &State, State) -> Option<N>,
    done: impl Fn(&N) -> bool,
    max_len: usize,
) -> Option<Vec<usize>> {
    let start = start?;
    let mut parent: HashMap<N, Option<(N, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((node, depth)) = queue.pop_front() {
        if done(&node) {
            let mut ops = Vec::new();
            let mut cur = node;
            while let Some((prev, op)) = parent[&cur].clone() {
                ops.push(op);
                cur = prev;
            }
            ops.reverse();
            return Some(ops);
        }
        if depth == max_len {
            continue;
        }
        let state = state_of(&node);
        for op in task.applicable_ops(state) {
            let next_state = task.operators[op].apply_unchecked(state);
            let Some(next) = step(&node, state, next_state) else {
                continue;
            };
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((node.clone(), op)));
                queue.push_back((next, depth + 1));
            }
        }
    }
    None
}

/// A shortest plan of at most `max_len` steps.
pub fn shortest_plan(task: &Task, max_len: usize) -> Option<Vec<usize>> {
    bounded_bfs(
        task,
        Some(task.init.clone()),
        |s| s,
        |_, _, next| Some(next),
        |s| task.is_goal(s),
        max_len,
    )
}

/// Is `candidate` true at some point of every plan of length ≤ `max_len`?
pub fn brute_force_landmark_oracle(task: &Task, candidate: &Landmark, max_len: usize) -> Verdict {
    let init = task.init.clone();
    let start = (!candidate.holds_in(&init)).then_some(init);
    let avoiding = bounded_bfs(
        task,
        start,
        |s| s,
        |_, _, next| (!candidate.holds_in(&next)).then_some(next),
        |s| task.is_goal(s),
        max_len,
    );
    match avoiding {
        Some(plan) => Verdict::Violated(plan),
        None if shortest_plan(task, max_len).is_some() => Verdict::Holds,
        None => Verdict::Inconclusive,
    }
}

/// Does `before` hold in the state right before `after` first becomes true,
/// in every plan of length ≤ `max_len`? Plans where `after` is true
/// initially or never becomes true say nothing about the ordering.
pub fn greedy_necessary_oracle(
    task: &Task,
    before: &Landmark,
    after: &Landmark,
    max_len: usize,
) -> Verdict {
    let init = task.init.clone();
    // Phase false: `after` not yet true. Phase true: it was first added
    // in a state where `before` was false.
    let start = (!after.holds_in(&init)).then_some((init, false));
    let violating = bounded_bfs(
        task,
        start,
        |(s, _)| s,
        |(_, violated), prev, next| {
            if *violated || !after.holds_in(&next) {
                Some((next, *violated))
            } else if !before.holds_in(prev) {
                Some((next, true))
            } else {
                None
            }
        },
        |(s, violated)| *violated && task.is_goal(s),
        max_len,
    );
    match violating {
        Some(plan) => Verdict::Violated(plan),
        None if shortest_plan(task, max_len).is_some() => Verdict::Holds,
        None => Verdict::Inconclusive,
    }
}
