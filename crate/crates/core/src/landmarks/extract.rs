//! Back-chaining landmark extraction.

use std::collections::VecDeque;

use super::{
    break_cycles, shared_and_disjunctive_preconditions, Landmark, LandmarkGraph, LandmarkNode,
    OrderingKind, Rrpg,
};
use crate::dtg::{self, Dtg};
use crate::task::{Fact, Task};

/// Values `l'` of the landmark's variable that lie on every DTG path from
/// the initial value to the landmark value. Values other than the landmark's
/// that the RRPG never reaches are removed from the DTG first.
pub fn dtg_landmarks(task: &Task, dtg: &Dtg, landmark: Fact, rrpg: &Rrpg) -> Vec<Fact> {
    let var = landmark.var;
    let init = task.init.get(var);
    if init == landmark.val {
        return Vec::new();
    }
    let usable = |d: usize| d == landmark.val || rrpg.is_reachable(task, Fact::new(var, d));
    if !dtg.reaches(init, landmark.val, usable) {
        return Vec::new();
    }
    (0..dtg.domain_size)
        .filter(|&d| d != init && d != landmark.val && usable(d))
        .filter(|&d| !dtg.reaches(init, landmark.val, |x| x != d && usable(x)))
        .map(|d| Fact::new(var, d))
        .collect()
}

struct Extraction<'a> {
    task: &'a Task,
    dtgs: Vec<Dtg>,
    nodes: Vec<Option<LandmarkNode>>,
    graph: LandmarkGraph,
    queue: VecDeque<usize>,
    /// `(ψ, F)`: F never became true in ψ's RRPG.
    potential: Vec<(usize, Fact)>,
}

impl<'a> Extraction<'a> {
    fn new(task: &'a Task) -> Self {
        Self {
            task,
            dtgs: dtg::build_all(task),
            nodes: Vec::new(),
            graph: LandmarkGraph::new(),
            queue: VecDeque::new(),
            potential: Vec::new(),
        }
    }

    fn live(&self) -> impl Iterator<Item = (usize, &LandmarkNode)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.as_ref().map(|n| (i, n)))
    }

    fn insert(&mut self, landmark: Landmark) -> usize {
        let is_goal = landmark.facts().iter().any(|f| self.task.goal.contains(*f));
        let node = LandmarkNode {
            landmark,
            first_achievers: Vec::new(),
            cost: 0,
            is_goal,
            unreachable: false,
        };
        let id = self.graph.add_node(node.clone());
        self.nodes.push(Some(node));
        self.queue.push_back(id);
        id
    }

    fn remove(&mut self, id: usize) {
        self.nodes[id] = None;
        let parents: Vec<usize> = self.graph.parents(id).keys().copied().collect();
        let children: Vec<usize> = self.graph.children(id).keys().copied().collect();
        for p in parents {
            self.graph.remove_ordering(p, id);
        }
        for c in children {
            self.graph.remove_ordering(id, c);
        }
    }

    /// Admits `phi` (if it does not clash with existing landmarks) and
    /// orders it before `psi`.
    fn add_landmark_and_ordering(&mut self, phi: Landmark, kind: OrderingKind, psi: usize) {
        // A fact landmark replaces any disjunction containing it.
        if let Some(fact) = phi.as_fact() {
            let subsumed: Vec<usize> = self
                .live()
                .filter(|(_, n)| n.landmark.is_disjunctive() && n.landmark.contains(fact))
                .map(|(i, _)| i)
                .collect();
            for id in subsumed {
                self.remove(id);
            }
        }
        let mut existing = None;
        for (i, n) in self.live() {
            if n.landmark == phi {
                existing = Some(i);
            } else if n.landmark.overlaps(&phi) {
                return;
            }
        }
        let id = match existing {
            Some(id) => id,
            None => self.insert(phi),
        };
        if id != psi && self.nodes[psi].is_some() {
            self.graph.add_ordering(id, psi, kind);
        }
    }

    fn run(mut self) -> LandmarkGraph {
        for &g in self.task.goal.facts() {
            self.insert(Landmark::fact(g));
        }

        while let Some(psi) = self.queue.pop_front() {
            let Some(node) = &self.nodes[psi] else {
                continue;
            };
            let target = node.landmark.clone();
            if target.holds_in(&self.task.init) {
                continue;
            }
            let rrpg = Rrpg::build(self.task, &target);
            let achievers = rrpg.achiever_ops();
            if let Some(n) = self.nodes[psi].as_mut() {
                n.unreachable = achievers.is_empty();
                n.first_achievers = achievers;
            }

            let (shared, disjunctions) = shared_and_disjunctive_preconditions(self.task, &rrpg);
            for f in shared {
                self.add_landmark_and_ordering(
                    Landmark::fact(f),
                    OrderingKind::GreedyNecessary,
                    psi,
                );
            }
            for d in disjunctions {
                let phi = Landmark::disjunction(d);
                if !phi.holds_in(&self.task.init) {
                    self.add_landmark_and_ordering(phi, OrderingKind::GreedyNecessary, psi);
                }
            }
            if let Some(fact) = target.as_fact() {
                let found = dtg_landmarks(self.task, &self.dtgs[fact.var], fact, &rrpg);
                for f in found {
                    self.add_landmark_and_ordering(Landmark::fact(f), OrderingKind::Natural, psi);
                }
            }
            for f in self.task.facts() {
                if !rrpg.is_reachable(self.task, f) && !target.contains(f) {
                    self.potential.push((psi, f));
                }
            }
        }

        for (psi, f) in std::mem::take(&mut self.potential) {
            if self.nodes[psi].is_none() {
                continue;
            }
            let target = self
                .live()
                .find(|(_, n)| n.landmark.as_fact() == Some(f))
                .map(|(i, _)| i);
            if let Some(to) = target.filter(|&to| to != psi) {
                self.graph.add_ordering(psi, to, OrderingKind::Natural);
            }
        }

        let keep: Vec<bool> = self.nodes.iter().map(Option::is_some).collect();
        for (id, node) in self.nodes.iter().enumerate() {
            if let Some(node) = node {
                let n = &mut self.graph.nodes[id];
                n.first_achievers = node.first_achievers.clone();
                n.cost = landmark_cost(self.task, node);
                n.unreachable =
                    node.unreachable || (node.is_goal && !has_adder(self.task, &node.landmark));
            }
        }
        let mut graph = self.graph;
        graph.retain_nodes(&keep);
        // Approximations can close cycles on unsolvable tasks.
        break_cycles(&mut graph);
        graph
    }
}

fn has_adder(task: &Task, landmark: &Landmark) -> bool {
    task.operators
        .iter()
        .any(|op| op.effects.iter().any(|e| landmark.contains(e.fact())))
}

/// Cheapest recorded first achiever; without a record, the cheapest operator
/// with an effect adding one of the landmark's facts; 0 if there is none.
fn landmark_cost(task: &Task, node: &LandmarkNode) -> u64 {
    if let Some(c) = node.first_achievers.iter().map(|&o| task.cost(o)).min() {
        return c;
    }
    task.operators
        .iter()
        .enumerate()
        .filter(|(_, op)| op.effects.iter().any(|e| node.landmark.contains(e.fact())))
        .map(|(i, _)| task.cost(i))
        .min()
        .unwrap_or(0)
}

/// Landmarks and natural/greedy-necessary orderings found by back-chaining
/// from the goal facts (FIFO, in goal order).
pub fn extract_landmark_graph(task: &Task) -> LandmarkGraph {
    Extraction::new(task).run()
}
