//! Restricted relaxed planning graphs and the preconditions shared by the
//! possible first achievers of a landmark.

use std::collections::{BTreeMap, BTreeSet};

use super::{Landmark, MAX_DISJUNCTION_SIZE};
use crate::task::{Fact, Task};

/// An operator that may first achieve the target, with the indices of its
/// effects that add a target fact under reachable conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Achiever {
    pub op: usize,
    pub effects: Vec<usize>,
}

/// Delete-relaxed reachability from the initial state without ever adding
/// the target landmark.
#[derive(Clone, Debug)]
pub struct Rrpg {
    pub target: Landmark,
    /// Indexed by `Task::fact_id`.
    pub reachable: Vec<bool>,
    pub achievers: Vec<Achiever>,
}

impl Rrpg {
    /// Operators with an unconditional effect adding a target fact are left
    /// out; conditional effects adding a target fact are ignored while the
    /// rest of their operator stays.
    pub fn build(task: &Task, target: &Landmark) -> Self {
        let adds_target = |var: usize, val: usize| target.contains(Fact::new(var, val));
        let excluded: Vec<bool> = task
            .operators
            .iter()
            .map(|op| {
                op.effects
                    .iter()
                    .any(|e| !e.is_conditional() && adds_target(e.var, e.newval))
            })
            .collect();

        let mut reachable = vec![false; task.num_facts()];
        for (var, &val) in task.init.values().iter().enumerate() {
            reachable[task.fact_id(Fact::new(var, val))] = true;
        }
        let all = |reachable: &[bool], facts: std::slice::Iter<'_, Fact>| {
            facts.as_slice().iter().all(|f| reachable[task.fact_id(*f)])
        };
        loop {
            let mut changed = false;
            for (i, op) in task.operators.iter().enumerate() {
                if excluded[i] || !all(&reachable, op.pre.iter()) {
                    continue;
                }
                for e in &op.effects {
                    if adds_target(e.var, e.newval) {
                        continue;
                    }
                    let id = task.fact_id(e.fact());
                    if !reachable[id] && all(&reachable, e.cond.iter()) {
                        reachable[id] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let achievers = task
            .operators
            .iter()
            .enumerate()
            .filter_map(|(i, op)| {
                let effects: Vec<usize> = op
                    .effects
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| adds_target(e.var, e.newval))
                    .filter(|(_, e)| {
                        op.extended_precondition(e)
                            .iter()
                            .all(|f| reachable[task.fact_id(*f)])
                    })
                    .map(|(j, _)| j)
                    .collect();
                (!effects.is_empty()).then_some(Achiever { op: i, effects })
            })
            .collect();

        Self {
            target: target.clone(),
            reachable,
            achievers,
        }
    }

    pub fn is_reachable(&self, task: &Task, fact: Fact) -> bool {
        self.reachable[task.fact_id(fact)]
    }

    /// Distinct operator indices of the possible first achievers.
    pub fn achiever_ops(&self) -> Vec<usize> {
        self.achievers.iter().map(|a| a.op).collect()
    }

    /// Extended precondition of every (operator, effect) pair that may first
    /// add the target.
    pub fn extended_preconditions(&self, task: &Task) -> Vec<Vec<Fact>> {
        self.achievers
            .iter()
            .flat_map(|a| {
                let op = &task.operators[a.op];
                a.effects
                    .iter()
                    .map(move |&j| op.extended_precondition(&op.effects[j]))
            })
            .collect()
    }
}

/// Facts shared by the extended preconditions of all possible first
/// achievers, and disjunctions that pick at least one extended-precondition
/// fact of a single predicate from every achiever.
///
/// Disjunctions have 2 to 4 facts, none of them true in the initial state.
pub fn shared_and_disjunctive_preconditions(
    task: &Task,
    rrpg: &Rrpg,
) -> (Vec<Fact>, Vec<Vec<Fact>>) {
    let pres = rrpg.extended_preconditions(task);
    let Some((first, rest)) = pres.split_first() else {
        return (Vec::new(), Vec::new());
    };

    let mut shared: BTreeSet<Fact> = first.iter().copied().collect();
    for p in rest {
        shared.retain(|f| p.contains(f));
    }

    // predicate -> (facts seen, number of achievers contributing a fact)
    let mut buckets: BTreeMap<&str, (BTreeSet<Fact>, usize)> = BTreeMap::new();
    for p in &pres {
        let mut seen_here = BTreeSet::new();
        for &f in p {
            let pred = task.predicate(f);
            let bucket = buckets.entry(pred).or_default();
            bucket.0.insert(f);
            if seen_here.insert(pred) {
                bucket.1 += 1;
            }
        }
    }
    let mut disjunctions: Vec<Vec<Fact>> = Vec::new();
    for (facts, count) in buckets.into_values() {
        if count != pres.len() || facts.len() < 2 || facts.len() > MAX_DISJUNCTION_SIZE {
            continue;
        }
        if facts.iter().any(|f| task.init.holds(*f)) {
            continue;
        }
        let set: Vec<Fact> = facts.into_iter().collect();
        if !disjunctions.contains(&set) {
            disjunctions.push(set);
        }
    }
    (shared.into_iter().collect(), disjunctions)
}
