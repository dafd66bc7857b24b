//! Prioritised open lists: a regular and a preferred queue per heuristic.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

/// A deferred successor: the parent's id and the operator leading out of it.
/// Ordered by key, tie key, operator cost, then insertion order.
#[derive(Clone, Copy, Debug)]
pub struct QueueEntry {
    pub key: f64,
    pub tie: u64,
    pub op_cost: u64,
    pub seq: u64,
    pub parent: usize,
    pub op: usize,
}

impl QueueEntry {
    fn sort_key(&self) -> (u64, u64, u64) {
        (self.tie, self.op_cost, self.seq)
    }
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QueueEntry {}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

/// Queue `2i` is the regular queue of heuristic `i`, `2i + 1` its
/// preferred queue.
#[derive(Clone, Debug)]
pub struct OpenQueues {
    queues: Vec<BinaryHeap<Reverse<QueueEntry>>>,
    priority: Vec<i64>,
    boost_added: Vec<u64>,
    next_seq: u64,
    served_max: bool,
}

impl OpenQueues {
    pub fn new(num_heuristics: usize) -> Self {
        let n = 2 * num_heuristics;
        Self {
            queues: vec![BinaryHeap::new(); n],
            priority: vec![0; n],
            boost_added: vec![0; n],
            next_seq: 0,
            served_max: true,
        }
    }

    pub fn regular(heuristic: usize) -> usize {
        2 * heuristic
    }

    pub fn preferred(heuristic: usize) -> usize {
        2 * heuristic + 1
    }

    pub fn is_preferred(queue: usize) -> bool {
        queue % 2 == 1
    }

    pub fn num_queues(&self) -> usize {
        self.queues.len()
    }

    pub fn len(&self) -> usize {
        self.queues.iter().map(BinaryHeap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.queues.iter().all(BinaryHeap::is_empty)
    }

    pub fn priority(&self, queue: usize) -> i64 {
        self.priority[queue]
    }

    pub fn boost_added(&self) -> &[u64] {
        &self.boost_added
    }

    /// True unless some pop served a non-maximal queue.
    pub fn served_max_priority(&self) -> bool {
        self.served_max
    }

    pub fn push(
        &mut self,
        queue: usize,
        key: f64,
        tie: u64,
        op_cost: u64,
        parent: usize,
        op: usize,
    ) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.queues[queue].push(Reverse(QueueEntry {
            key,
            tie,
            op_cost,
            seq,
            parent,
            op,
        }));
    }

    /// Raises the priority of every preferred queue.
    pub fn boost(&mut self, amount: u64) {
        for q in (0..self.queues.len()).filter(|&q| Self::is_preferred(q)) {
            self.priority[q] += amount as i64;
            self.boost_added[q] += amount;
        }
    }

    /// Pops from the non-empty queue of highest priority (lowest index on
    /// ties) and lowers that queue's priority by one.
    pub fn pop(&mut self) -> Option<(usize, QueueEntry)> {
        let q = (0..self.queues.len())
            .filter(|&q| !self.queues[q].is_empty())
            .max_by_key(|&q| (self.priority[q], Reverse(q)))?;
        let top = self.priority[q];
        if self
            .queues
            .iter()
            .zip(&self.priority)
            .any(|(queue, &p)| !queue.is_empty() && p > top)
        {
            self.served_max = false;
        }
        self.priority[q] -= 1;
        let Reverse(entry) = self.queues[q].pop()?;
        Some((q, entry))
    }
}
