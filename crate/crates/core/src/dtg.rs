//! Domain transition graphs.

use std::collections::{BTreeSet, VecDeque};

use crate::task::Task;

/// Value transitions of one variable induced by the operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dtg {
    pub var: usize,
    pub domain_size: usize,
    pub arcs: BTreeSet<(usize, usize)>,
}

impl Dtg {
    /// Arc `(d, d')` iff `d ≠ d'` and some effect sets `var` to `d'` where the
    /// operator's precondition plus effect condition either requires `var = d`
    /// or mentions `var` not at all.
    pub fn build(task: &Task, var: usize) -> Self {
        let domain_size = task.domain_size(var);
        let mut arcs = BTreeSet::new();
        for op in &task.operators {
            for eff in op.effects.iter().filter(|e| e.var == var) {
                let required: Vec<usize> = op
                    .pre
                    .iter()
                    .chain(eff.cond.iter())
                    .filter(|f| f.var == var)
                    .map(|f| f.val)
                    .collect();
                if required.is_empty() {
                    arcs.extend(
                        (0..domain_size)
                            .filter(|&d| d != eff.newval)
                            .map(|d| (d, eff.newval)),
                    );
                } else {
                    arcs.extend(
                        required
                            .into_iter()
                            .filter(|&d| d != eff.newval)
                            .map(|d| (d, eff.newval)),
                    );
                }
            }
        }
        Self {
            var,
            domain_size,
            arcs,
        }
    }

    pub fn successors(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.range((d, 0)..(d + 1, 0)).map(|&(_, to)| to)
    }

    /// Is `to` reachable from `from` using only nodes for which `allowed`
    /// holds? `from` itself is always entered.
    pub fn reaches(&self, from: usize, to: usize, allowed: impl Fn(usize) -> bool) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.domain_size];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(d) = queue.pop_front() {
            for next in self.successors(d) {
                if next == to {
                    return true;
                }
                if !seen[next] && allowed(next) {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        false
    }
}

/// DTGs for every variable of the task.
pub fn build_all(task: &Task) -> Vec<Dtg> {
    (0..task.num_variables())
        .map(|v| Dtg::build(task, v))
        .collect()
}
