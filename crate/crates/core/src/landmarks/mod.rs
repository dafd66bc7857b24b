//! Landmarks, their orderings, and extraction from a task.

mod extract;
mod reasonable;
mod rrpg;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::task::{Fact, State, Task};

pub use extract::{dtg_landmarks, extract_landmark_graph};
pub use reasonable::{add_reasonable_orderings, break_cycles};
pub use rrpg::{shared_and_disjunctive_preconditions, Achiever, Rrpg};

/// Largest disjunctive landmark that extraction will create.
pub const MAX_DISJUNCTION_SIZE: usize = 4;

/// Kinds of ordering arcs, weakest first. When two kinds are derived for the
/// same pair, the stronger one is kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderingKind {
    ObedientReasonable,
    Reasonable,
    Natural,
    GreedyNecessary,
}

impl OrderingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderingKind::ObedientReasonable => "obedient-reasonable",
            OrderingKind::Reasonable => "reasonable",
            OrderingKind::Natural => "natural",
            OrderingKind::GreedyNecessary => "greedy-necessary",
        }
    }

    /// Natural or greedy-necessary.
    pub fn is_sound(self) -> bool {
        self >= OrderingKind::Natural
    }
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fact landmark (one fact) or a disjunction of 2–4 facts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Landmark {
    facts: Vec<Fact>,
}

impl Landmark {
    pub fn fact(fact: Fact) -> Self {
        Self { facts: vec![fact] }
    }

    /// Facts are sorted and deduplicated.
    pub fn disjunction(facts: impl IntoIterator<Item = Fact>) -> Self {
        let facts: BTreeSet<Fact> = facts.into_iter().collect();
        Self {
            facts: facts.into_iter().collect(),
        }
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn is_disjunctive(&self) -> bool {
        self.facts.len() > 1
    }

    pub fn as_fact(&self) -> Option<Fact> {
        match self.facts.as_slice() {
            [f] => Some(*f),
            _ => None,
        }
    }

    pub fn contains(&self, fact: Fact) -> bool {
        self.facts.binary_search(&fact).is_ok()
    }

    /// At least one disjunct holds.
    pub fn holds_in(&self, state: &State) -> bool {
        self.facts.iter().any(|f| state.holds(*f))
    }

    pub fn overlaps(&self, other: &Landmark) -> bool {
        self.facts.iter().any(|f| other.contains(*f))
    }

    /// Fact names joined with " ∨ ".
    pub fn label(&self, task: &Task) -> String {
        self.facts
            .iter()
            .map(|f| task.fact_name(*f))
            .collect::<Vec<_>>()
            .join(" ∨ ")
    }
}

/// A landmark together with what extraction learned about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LandmarkNode {
    pub landmark: Landmark,
    /// Possible first achievers found when the landmark was back-chained
    /// from; empty if it never was.
    pub first_achievers: Vec<usize>,
    /// Cheapest achiever cost, used by the cost-sensitive landmark heuristic.
    pub cost: u64,
    /// The goal entails this landmark.
    pub is_goal: bool,
    /// Nothing can make it true once it is false: either no achiever is
    /// reachable, or it is a goal no operator adds.
    pub unreachable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ordering {
    pub from: usize,
    pub to: usize,
    pub kind: OrderingKind,
}

/// Landmarks plus typed ordering arcs. At most one arc per ordered pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LandmarkGraph {
    nodes: Vec<LandmarkNode>,
    arcs: BTreeMap<(usize, usize), OrderingKind>,
    parents: Vec<BTreeMap<usize, OrderingKind>>,
    children: Vec<BTreeMap<usize, OrderingKind>>,
}

impl LandmarkGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[LandmarkNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &LandmarkNode {
        &self.nodes[id]
    }

    pub fn landmark(&self, id: usize) -> &Landmark {
        &self.nodes[id].landmark
    }

    pub fn add_node(&mut self, node: LandmarkNode) -> usize {
        self.nodes.push(node);
        self.parents.push(BTreeMap::new());
        self.children.push(BTreeMap::new());
        self.nodes.len() - 1
    }

    /// Id of the landmark containing `fact`, if any.
    pub fn find_fact(&self, fact: Fact) -> Option<usize> {
        self.nodes.iter().position(|n| n.landmark.contains(fact))
    }

    /// Id of the fact landmark `{fact}`, if any.
    pub fn find_fact_landmark(&self, fact: Fact) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n.landmark.as_fact() == Some(fact))
    }

    /// Adds `from → to`, or upgrades an existing arc to `kind` if stronger.
    pub fn add_ordering(&mut self, from: usize, to: usize, kind: OrderingKind) {
        assert_ne!(from, to, "reflexive landmark ordering");
        let entry = self.arcs.entry((from, to)).or_insert(kind);
        if kind > *entry {
            *entry = kind;
        }
        let kind = *entry;
        self.children[from].insert(to, kind);
        self.parents[to].insert(from, kind);
    }

    /// Overwrites the kind of an arc regardless of strength.
    pub fn set_ordering(&mut self, from: usize, to: usize, kind: OrderingKind) {
        assert_ne!(from, to, "reflexive landmark ordering");
        self.arcs.insert((from, to), kind);
        self.children[from].insert(to, kind);
        self.parents[to].insert(from, kind);
    }

    pub fn remove_ordering(&mut self, from: usize, to: usize) -> Option<OrderingKind> {
        let kind = self.arcs.remove(&(from, to))?;
        self.children[from].remove(&to);
        self.parents[to].remove(&from);
        Some(kind)
    }

    pub fn ordering(&self, from: usize, to: usize) -> Option<OrderingKind> {
        self.arcs.get(&(from, to)).copied()
    }

    /// All arcs ordered by `(from, to)`.
    pub fn orderings(&self) -> impl Iterator<Item = Ordering> + '_ {
        self.arcs
            .iter()
            .map(|(&(from, to), &kind)| Ordering { from, to, kind })
    }

    pub fn num_orderings(&self) -> usize {
        self.arcs.len()
    }

    pub fn parents(&self, id: usize) -> &BTreeMap<usize, OrderingKind> {
        &self.parents[id]
    }

    pub fn children(&self, id: usize) -> &BTreeMap<usize, OrderingKind> {
        &self.children[id]
    }

    /// Acyclicity of the subgraph made of arcs accepted by `keep`.
    pub fn is_acyclic_with(&self, keep: impl Fn(OrderingKind) -> bool) -> bool {
        find_cycle(self, &keep).is_none()
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_acyclic_with(|_| true)
    }

    /// Keeps only nodes for which `keep` returns true, renumbering the rest
    /// in order and dropping their arcs.
    pub(crate) fn retain_nodes(&mut self, keep: &[bool]) {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.drain(..).enumerate() {
            if keep[i] {
                remap[i] = nodes.len();
                nodes.push(node);
            }
        }
        let arcs: Vec<_> = std::mem::take(&mut self.arcs)
            .into_iter()
            .filter(|&((f, t), _)| keep[f] && keep[t])
            .map(|((f, t), k)| ((remap[f], remap[t]), k))
            .collect();
        self.parents = vec![BTreeMap::new(); nodes.len()];
        self.children = vec![BTreeMap::new(); nodes.len()];
        self.nodes = nodes;
        for ((f, t), k) in arcs {
            self.set_ordering(f, t, k);
        }
    }

    /// Counts per ordering kind, weakest first.
    pub fn ordering_counts(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        for kind in self.arcs.values() {
            counts[*kind as usize] += 1;
        }
        counts
    }
}

/// A cycle as a list of arcs, found by depth-first search over arcs accepted
/// by `keep`, visiting nodes and children in index order.
pub(crate) fn find_cycle(
    graph: &LandmarkGraph,
    keep: &dyn Fn(OrderingKind) -> bool,
) -> Option<Vec<(usize, usize)>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = graph.len();
    let mut mark = vec![Mark::New; n];
    let mut path: Vec<usize> = Vec::new();
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // Stack of (node, children still to visit).
        let mut stack: Vec<(usize, Vec<usize>)> = Vec::new();
        let kids = |v: usize| -> Vec<usize> {
            graph.children[v]
                .iter()
                .filter(|(_, k)| keep(**k))
                .map(|(c, _)| *c)
                .rev()
                .collect()
        };
        mark[root] = Mark::Active;
        path.push(root);
        stack.push((root, kids(root)));
        while let Some((v, pending)) = stack.last_mut() {
            let v = *v;
            match pending.pop() {
                Some(c) => match mark[c] {
                    Mark::New => {
                        mark[c] = Mark::Active;
                        path.push(c);
                        stack.push((c, kids(c)));
                    }
                    Mark::Active => {
                        let start = path
                            .iter()
                            .position(|&p| p == c)
                            .expect("active node on path");
                        let mut cycle: Vec<(usize, usize)> =
                            path[start..].windows(2).map(|w| (w[0], w[1])).collect();
                        cycle.push((v, c));
                        return Some(cycle);
                    }
                    Mark::Done => {}
                },
                None => {
                    mark[v] = Mark::Done;
                    path.pop();
                    stack.pop();
                }
            }
        }
    }
    None
}
