//! Shared fixtures: random tasks, an independent interpreter, brute-force
//! reachability, and the hand-encoded grid and logistics tasks.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use waypoint::heuristics::{Cost, CostMode, EvalResult, Evaluator, LandmarkStatus};
use waypoint::{Effect, Fact, Metric, Operator, PartialAssignment, State, Task, Variable};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_vars: usize,
    pub max_domain: usize,
    pub max_ops: usize,
    pub max_goals: usize,
    pub max_facts: usize,
    pub conditional: f64,
}

impl Shape {
    pub const SMALL: Shape = Shape {
        max_vars: 5,
        max_domain: 4,
        max_ops: 10,
        max_goals: 3,
        max_facts: usize::MAX,
        conditional: 0.15,
    };

    pub const TINY_FACTS: Shape = Shape {
        max_vars: 4,
        max_domain: 3,
        max_ops: 8,
        max_goals: 3,
        max_facts: 10,
        conditional: 0.2,
    };
}

const PREDICATES: [&str; 3] = ["at", "in", "on"];

fn random_assignment(
    rng: &mut ChaCha8Rng,
    domains: &[usize],
    count: usize,
    avoid: &[usize],
) -> Vec<Fact> {
    let mut vars: Vec<usize> = (0..domains.len()).filter(|v| !avoid.contains(v)).collect();
    vars.shuffle(rng);
    vars.truncate(count);
    vars.sort_unstable();
    vars.into_iter()
        .map(|v| Fact::new(v, rng.gen_range(0..domains[v])))
        .collect()
}

/// A random task of the given shape. Fact names share a few predicate
/// symbols so that disjunctive landmarks can arise.
pub fn random_task(rng: &mut ChaCha8Rng, shape: Shape) -> Task {
    let domains: Vec<usize> = loop {
        let n = rng.gen_range(1..=shape.max_vars);
        let d: Vec<usize> = (0..n)
            .map(|_| rng.gen_range(2..=shape.max_domain))
            .collect();
        if d.iter().sum::<usize>() <= shape.max_facts {
            break d;
        }
    };
    let n = domains.len();
    let variables: Vec<Variable> = domains
        .iter()
        .enumerate()
        .map(|(v, &size)| Variable {
            fact_names: (0..size)
                .map(|d| {
                    format!(
                        "{}(v{v},{d})",
                        PREDICATES[rng.gen_range(0..PREDICATES.len())]
                    )
                })
                .collect(),
        })
        .collect();

    let mut mutex_groups = Vec::new();
    if n >= 2 && rng.gen_bool(0.3) {
        let group = random_assignment(rng, &domains, 2, &[]);
        mutex_groups.push(group);
    }

    let init = State::new(domains.iter().map(|&d| rng.gen_range(0..d)).collect());
    let goal_count = rng.gen_range(1..=shape.max_goals.min(n));
    let goal =
        PartialAssignment::from_facts(random_assignment(rng, &domains, goal_count, &[])).unwrap();

    let num_ops = rng.gen_range(1..=shape.max_ops);
    let mut operators = Vec::new();
    for i in 0..num_ops {
        let pre_count = rng.gen_range(0..=2.min(n));
        let pre = random_assignment(rng, &domains, pre_count, &[]);
        let pre_vars: Vec<usize> = pre.iter().map(|f| f.var).collect();
        let eff_count = rng.gen_range(1..=2.min(n));
        let targets = random_assignment(rng, &domains, eff_count, &[]);
        let effects = targets
            .into_iter()
            .map(|f| {
                let mut avoid = pre_vars.clone();
                avoid.push(f.var);
                let cond = if rng.gen_bool(shape.conditional) && avoid.len() < n {
                    random_assignment(rng, &domains, 1, &avoid)
                } else {
                    Vec::new()
                };
                Effect {
                    cond: PartialAssignment::from_facts(cond).unwrap(),
                    var: f.var,
                    newval: f.val,
                }
            })
            .collect();
        operators.push(Operator {
            name: format!("op{i}"),
            pre: PartialAssignment::from_facts(pre).unwrap(),
            effects,
            cost: rng.gen_range(0..=5),
        });
    }
    let metric = if rng.gen_bool(0.8) {
        Metric::General
    } else {
        Metric::Unit
    };
    Task::new(variables, mutex_groups, init, goal, operators, metric)
}

/// A uniformly random total assignment.
pub fn random_state(rng: &mut ChaCha8Rng, task: &Task) -> State {
    State::new(
        (0..task.num_variables())
            .map(|v| rng.gen_range(0..task.domain_size(v)))
            .collect(),
    )
}

// Independent operator semantics, written against the raw fields.

pub fn interp_apply(task: &Task, op: usize, state: &[usize]) -> Option<Vec<usize>> {
    let op = &task.operators[op];
    if op.pre.iter().any(|f| state[f.var] != f.val) {
        return None;
    }
    let mut next = state.to_vec();
    let mut written: Vec<Option<usize>> = vec![None; state.len()];
    for e in &op.effects {
        if e.cond.iter().all(|f| state[f.var] == f.val) {
            if written[e.var].is_some_and(|w| w != e.newval) {
                return None;
            }
            written[e.var] = Some(e.newval);
            next[e.var] = e.newval;
        }
    }
    Some(next)
}

pub fn interp_cost(task: &Task, op: usize) -> u64 {
    match task.metric {
        Metric::Unit => 1,
        Metric::General => task.operators[op].cost,
    }
}

/// Cost of the plan if it is executable and reaches the goal.
pub fn interp_validate(task: &Task, ops: &[usize]) -> Option<u64> {
    let mut state = task.init.values().to_vec();
    let mut cost = 0;
    for &op in ops {
        state = interp_apply(task, op, &state)?;
        cost += interp_cost(task, op);
    }
    task.goal
        .iter()
        .all(|f| state[f.var] == f.val)
        .then_some(cost)
}

/// Every state reachable from the initial state.
pub fn reachable_states(task: &Task) -> Vec<Vec<usize>> {
    let start = task.init.values().to_vec();
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut out = vec![start];
    while let Some(s) = queue.pop_front() {
        for op in 0..task.operators.len() {
            if let Some(next) = interp_apply(task, op, &s) {
                if seen.insert(next.clone()) {
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    out
}

pub fn solvable(task: &Task) -> bool {
    reachable_states(task)
        .iter()
        .any(|s| task.goal.iter().all(|f| s[f.var] == f.val))
}

/// Cheapest plan cost by uniform-cost search, if solvable.
pub fn optimal_cost(task: &Task) -> Option<u64> {
    use std::cmp::Reverse;
    use std::collections::{BinaryHeap, HashMap};
    let start = task.init.values().to_vec();
    let mut dist = HashMap::from([(start.clone(), 0u64)]);
    let mut heap = BinaryHeap::from([Reverse((0u64, start))]);
    while let Some(Reverse((d, s))) = heap.pop() {
        if dist.get(&s).is_some_and(|&best| best < d) {
            continue;
        }
        if task.goal.iter().all(|f| s[f.var] == f.val) {
            return Some(d);
        }
        for op in 0..task.operators.len() {
            if let Some(next) = interp_apply(task, op, &s) {
                let nd = d + interp_cost(task, op);
                if dist.get(&next).is_none_or(|&old| nd < old) {
                    dist.insert(next.clone(), nd);
                    heap.push(Reverse((nd, next)));
                }
            }
        }
    }
    None
}

// Delete relaxation oracles.

fn extended_pre(op: &Operator, e: &Effect) -> BTreeSet<Fact> {
    op.pre.iter().chain(e.cond.iter()).copied().collect()
}

/// Round-robin Bellman iteration to a fixpoint over (operator, effect)
/// pairs: cost(f) = min over achievers of weight + Σ cost(extended pre).
pub fn bellman_fact_costs(task: &Task, state: &State, mode: CostMode) -> Vec<Cost> {
    let mut cost = vec![Cost::INFINITY; task.num_facts()];
    for f in task.facts() {
        if state.holds(f) {
            cost[task.fact_id(f)] = Cost::ZERO;
        }
    }
    loop {
        let mut changed = false;
        for (i, op) in task.operators.iter().enumerate() {
            let w = match mode {
                CostMode::Ignore => Cost::new(1, 0),
                CostMode::Pure => Cost::new(interp_cost(task, i), 1),
                CostMode::PlusOne => Cost::new(interp_cost(task, i) + 1, 0),
            };
            for e in &op.effects {
                let mut total = Some((w.value, w.dist));
                for f in extended_pre(op, e) {
                    let c = cost[task.fact_id(f)];
                    total = total
                        .filter(|_| c != Cost::INFINITY)
                        .map(|(v, d)| (v + c.value, d + c.dist));
                }
                let total = total.map_or(Cost::INFINITY, |(v, d)| Cost::new(v, d));
                let target = task.fact_id(e.fact());
                if total < cost[target] {
                    cost[target] = total;
                    changed = true;
                }
            }
        }
        if !changed {
            return cost;
        }
    }
}

/// Facts reached by applying `ops` under delete-free semantics until
/// nothing changes.
pub fn delete_free_closure(task: &Task, state: &State, ops: &[usize]) -> BTreeSet<Fact> {
    let mut facts: BTreeSet<Fact> = task.facts().filter(|f| state.holds(*f)).collect();
    loop {
        let before = facts.len();
        for &o in ops {
            let op = &task.operators[o];
            if !op.pre.iter().all(|f| facts.contains(f)) {
                continue;
            }
            for e in &op.effects {
                if e.cond.iter().all(|f| facts.contains(f)) {
                    facts.insert(e.fact());
                }
            }
        }
        if facts.len() == before {
            return facts;
        }
    }
}

/// Goal reachable under the delete relaxation using every operator.
pub fn relaxed_solvable(task: &Task, state: &State) -> bool {
    let all: Vec<usize> = (0..task.operators.len()).collect();
    let facts = delete_free_closure(task, state, &all);
    task.goal.iter().all(|f| facts.contains(f))
}

// Gridworld with a printed heuristic table.

pub const GRID_ROWS: usize = 6;
pub const GRID_COLS: usize = 9;
pub const GRID_START: (usize, usize) = (0, 5);
pub const GRID_G1: (usize, usize) = (5, 3);
pub const GRID_G2: (usize, usize) = (4, 7);
pub const GRID_WALLS: [(usize, usize); 3] = [(1, 4), (1, 5), (1, 6)];

/// Heuristic per cell; goals are 0, walls are never entered.
#[rustfmt::skip]
pub const GRID_H: [[f64; GRID_COLS]; GRID_ROWS] = [
    [3.8, 3.8, 3.8, 3.8, 3.8, 4.0, 4.0, 4.0, 4.0],
    [3.4, 3.4, 3.4, 3.4, 0.0, 0.0, 0.0, 3.0, 3.0],
    [2.6, 2.6, 2.6, 2.6, 2.6, 1.9, 2.0, 2.0, 2.0],
    [2.6, 1.8, 1.8, 1.8, 1.8, 1.9, 1.0, 1.0, 1.0],
    [2.6, 1.8, 1.0, 1.0, 1.0, 1.9, 1.0, 0.0, 1.0],
    [2.6, 1.8, 1.0, 0.0, 1.0, 1.9, 1.0, 1.0, 1.0],
];

pub fn grid_cell(r: usize, c: usize) -> usize {
    r * GRID_COLS + c
}

/// One variable: the agent's cell, plus a final value reached from either
/// goal cell by a free operator.
pub fn grid_task() -> Task {
    let sink = GRID_ROWS * GRID_COLS;
    let mut names: Vec<String> = (0..GRID_ROWS)
        .flat_map(|r| (0..GRID_COLS).map(move |c| format!("agent({r},{c})")))
        .collect();
    names.push("done".into());
    let blocked = |r: usize, c: usize| GRID_WALLS.contains(&(r, c));
    let mut operators = Vec::new();
    for r in 0..GRID_ROWS {
        for c in 0..GRID_COLS {
            if blocked(r, c) {
                continue;
            }
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                    if nr < 0 || nc < 0 || nr >= GRID_ROWS as i64 || nc >= GRID_COLS as i64 {
                        continue;
                    }
                    let (nr, nc) = (nr as usize, nc as usize);
                    if blocked(nr, nc) {
                        continue;
                    }
                    operators.push(Operator {
                        name: format!("move {r},{c} {nr},{nc}"),
                        pre: PartialAssignment::from_facts([Fact::new(0, grid_cell(r, c))])
                            .unwrap(),
                        effects: vec![Effect::unconditional(0, grid_cell(nr, nc))],
                        cost: 1,
                    });
                }
            }
        }
    }
    for (name, (r, c)) in [("finish g1", GRID_G1), ("finish g2", GRID_G2)] {
        operators.push(Operator {
            name: name.into(),
            pre: PartialAssignment::from_facts([Fact::new(0, grid_cell(r, c))]).unwrap(),
            effects: vec![Effect::unconditional(0, sink)],
            cost: 0,
        });
    }
    Task::new(
        vec![Variable { fact_names: names }],
        vec![],
        State::new(vec![grid_cell(GRID_START.0, GRID_START.1)]),
        PartialAssignment::from_facts([Fact::new(0, sink)]).unwrap(),
        operators,
        Metric::General,
    )
}

/// Looks the heuristic value up in the printed table.
pub struct GridHeuristic;

impl Evaluator for GridHeuristic {
    fn evaluate(&mut self, state: &State, _: Option<&LandmarkStatus>) -> EvalResult {
        let cell = state[0];
        let h = if cell == GRID_ROWS * GRID_COLS {
            0.0
        } else {
            GRID_H[cell / GRID_COLS][cell % GRID_COLS]
        };
        EvalResult {
            h,
            tie: 0,
            preferred: Vec::new(),
        }
    }
}

// Two-city logistics: the box goes from B to F.
//
// Left city: A, B, C, D with truck t1 (starts at A), airport C.
// Right city: airports E and F, location G; truck t2 (starts at E)
// drives between E and G only. Planes p1 (at C) and p2 (at E) fly
// between C, E and F.

pub const LOGISTICS_PLACES: [&str; 7] = ["A", "B", "C", "D", "E", "F", "G"];
pub const LOGISTICS_VEHICLES: [&str; 4] = ["t1", "t2", "p1", "p2"];

pub fn logistics_task() -> Task {
    let box_names: Vec<String> = LOGISTICS_PLACES
        .iter()
        .map(|p| format!("at(box,{p})"))
        .chain(LOGISTICS_VEHICLES.iter().map(|v| format!("in(box,{v})")))
        .collect();
    let reach: [&[&str]; 4] = [
        &["A", "B", "C", "D"],
        &["E", "G"],
        &["C", "E", "F"],
        &["C", "E", "F"],
    ];
    let mut variables = vec![Variable {
        fact_names: box_names.clone(),
    }];
    for (v, places) in LOGISTICS_VEHICLES.iter().zip(reach) {
        variables.push(Variable {
            fact_names: places.iter().map(|p| format!("at({v},{p})")).collect(),
        });
    }
    let place = |p: &str| LOGISTICS_PLACES.iter().position(|q| *q == p).unwrap();
    let fact = |var: usize, val: usize| Fact::new(var, val);
    let mut operators = Vec::new();
    for (i, (v, places)) in LOGISTICS_VEHICLES.iter().zip(reach).enumerate() {
        let var = i + 1;
        let verb = if v.starts_with('t') { "drive" } else { "fly" };
        for (a, from) in places.iter().enumerate() {
            for (b, to) in places.iter().enumerate() {
                if a != b {
                    operators.push(Operator {
                        name: format!("{verb} {v} {from} {to}"),
                        pre: PartialAssignment::from_facts([fact(var, a)]).unwrap(),
                        effects: vec![Effect::unconditional(var, b)],
                        cost: 1,
                    });
                }
            }
            let inside = LOGISTICS_PLACES.len() + i;
            operators.push(Operator {
                name: format!("load box {v} {from}"),
                pre: PartialAssignment::from_facts([fact(0, place(from)), fact(var, a)]).unwrap(),
                effects: vec![Effect::unconditional(0, inside)],
                cost: 1,
            });
            operators.push(Operator {
                name: format!("unload box {v} {from}"),
                pre: PartialAssignment::from_facts([fact(0, inside), fact(var, a)]).unwrap(),
                effects: vec![Effect::unconditional(0, place(from))],
                cost: 1,
            });
        }
    }
    // box at B, t1 at A, t2 at E, p1 at C, p2 at E
    let init = State::new(vec![place("B"), 0, 0, 0, 1]);
    Task::new(
        variables,
        vec![],
        init,
        PartialAssignment::from_facts([fact(0, place("F"))]).unwrap(),
        operators,
        Metric::Unit,
    )
}

/// Fact by display name.
pub fn fact_named(task: &Task, name: &str) -> Fact {
    task.facts()
        .find(|f| task.fact_name(*f) == name)
        .unwrap_or_else(|| panic!("no fact named {name}"))
}
