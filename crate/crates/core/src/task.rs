//! Finite-domain planning tasks: facts, states, operators with conditional
//! effects, and plan validation.

use std::collections::HashMap;
use std::fmt;

use crate::error::{ApplyError, ValidationError};

/// A variable/value pair `var ↦ val`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fact {
    pub var: usize,
    pub val: usize,
}

impl Fact {
    pub const fn new(var: usize, val: usize) -> Self {
        Self { var, val }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}={}", self.var, self.val)
    }
}

/// A set of facts with at most one fact per variable. Insertion order is kept.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartialAssignment {
    facts: Vec<Fact>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an assignment, rejecting two facts on the same variable.
    /// On failure the offending fact is returned.
    pub fn from_facts<I: IntoIterator<Item = Fact>>(facts: I) -> Result<Self, Fact> {
        let mut pa = Self::new();
        for f in facts {
            pa.push(f)?;
        }
        Ok(pa)
    }

    pub fn push(&mut self, fact: Fact) -> Result<(), Fact> {
        if self.value_of(fact.var).is_some() {
            return Err(fact);
        }
        self.facts.push(fact);
        Ok(())
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Fact> {
        self.facts.iter()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn value_of(&self, var: usize) -> Option<usize> {
        self.facts.iter().find(|f| f.var == var).map(|f| f.val)
    }

    pub fn contains(&self, fact: Fact) -> bool {
        self.facts.contains(&fact)
    }

    pub fn holds_in(&self, state: &State) -> bool {
        self.facts.iter().all(|f| state.holds(*f))
    }
}

impl<'a> IntoIterator for &'a PartialAssignment {
    type Item = &'a Fact;
    type IntoIter = std::slice::Iter<'a, Fact>;

    fn into_iter(self) -> Self::IntoIter {
        self.facts.iter()
    }
}

/// A total assignment, one value index per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(Vec<usize>);

impl State {
    pub fn new(values: Vec<usize>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> usize {
        self.0[var]
    }

    pub fn holds(&self, fact: Fact) -> bool {
        self.0.get(fact.var) == Some(&fact.val)
    }
}

impl std::ops::Index<usize> for State {
    type Output = usize;

    fn index(&self, var: usize) -> &usize {
        &self.0[var]
    }
}

/// `⟨cond, var, newval⟩`: sets `var` to `newval` when `cond` holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Effect {
    pub cond: PartialAssignment,
    pub var: usize,
    pub newval: usize,
}

impl Effect {
    pub fn unconditional(var: usize, newval: usize) -> Self {
        Self {
            cond: PartialAssignment::new(),
            var,
            newval,
        }
    }

    pub fn fact(&self) -> Fact {
        Fact::new(self.var, self.newval)
    }

    pub fn is_conditional(&self) -> bool {
        !self.cond.is_empty()
    }

    pub fn fires_in(&self, state: &State) -> bool {
        self.cond.holds_in(state)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operator {
    pub name: String,
    pub pre: PartialAssignment,
    pub effects: Vec<Effect>,
    pub cost: u64,
}

impl Operator {
    /// Precondition holds and the effects triggered in `state` do not write
    /// two different values to one variable.
    pub fn applicable(&self, state: &State) -> bool {
        self.pre.holds_in(state) && self.triggered_consistent(state)
    }

    fn triggered_consistent(&self, state: &State) -> bool {
        let fired: Vec<&Effect> = self.effects.iter().filter(|e| e.fires_in(state)).collect();
        for (i, a) in fired.iter().enumerate() {
            for b in &fired[i + 1..] {
                if a.var == b.var && a.newval != b.newval {
                    return false;
                }
            }
        }
        true
    }

    /// Successor state. Fails if the operator is not applicable.
    pub fn apply(&self, state: &State) -> Result<State, ApplyError> {
        if !self.applicable(state) {
            return Err(ApplyError {
                operator: self.name.clone(),
            });
        }
        Ok(self.apply_unchecked(state))
    }

    /// Successor state without the applicability check. Effect conditions are
    /// evaluated in `state`, not in the partially updated successor.
    pub fn apply_unchecked(&self, state: &State) -> State {
        let mut next = state.0.clone();
        for e in &self.effects {
            if e.fires_in(state) {
                next[e.var] = e.newval;
            }
        }
        State(next)
    }

    /// `pre ∪ cond(effect)`, the conditions under which `effect` fires.
    pub fn extended_precondition(&self, effect: &Effect) -> Vec<Fact> {
        let mut facts: Vec<Fact> = self.pre.facts().to_vec();
        for f in effect.cond.iter() {
            if !facts.contains(f) {
                facts.push(*f);
            }
        }
        facts
    }
}

/// A state variable: its domain is the list of fact names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub fact_names: Vec<String>,
}

impl Variable {
    pub fn domain_size(&self) -> usize {
        self.fact_names.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Every operator costs 1 regardless of its declared cost.
    Unit,
    /// Declared operator costs are used.
    General,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Unit => "unit",
            Metric::General => "general",
        }
    }
}

/// `⟨V, s0, s*, O, C⟩` plus the mutex groups supplied with the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub variables: Vec<Variable>,
    pub mutex_groups: Vec<Vec<Fact>>,
    pub init: State,
    pub goal: PartialAssignment,
    pub operators: Vec<Operator>,
    pub metric: Metric,
    fact_offsets: Vec<usize>,
    op_by_name: HashMap<String, usize>,
}

impl Task {
    /// Assembles a task. Structural validation is the parser's job; this
    /// only derives lookup tables.
    pub fn new(
        variables: Vec<Variable>,
        mutex_groups: Vec<Vec<Fact>>,
        init: State,
        goal: PartialAssignment,
        operators: Vec<Operator>,
        metric: Metric,
    ) -> Self {
        let mut fact_offsets = Vec::with_capacity(variables.len() + 1);
        let mut acc = 0;
        for v in &variables {
            fact_offsets.push(acc);
            acc += v.domain_size();
        }
        fact_offsets.push(acc);
        let mut op_by_name = HashMap::new();
        for (i, op) in operators.iter().enumerate() {
            op_by_name.entry(op.name.clone()).or_insert(i);
        }
        Self {
            variables,
            mutex_groups,
            init,
            goal,
            operators,
            metric,
            fact_offsets,
            op_by_name,
        }
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn domain_size(&self, var: usize) -> usize {
        self.variables[var].domain_size()
    }

    pub fn num_facts(&self) -> usize {
        *self.fact_offsets.last().unwrap_or(&0)
    }

    /// Dense index of a fact in `0..num_facts()`.
    pub fn fact_id(&self, fact: Fact) -> usize {
        self.fact_offsets[fact.var] + fact.val
    }

    pub fn fact_from_id(&self, id: usize) -> Fact {
        let var = self.fact_offsets.partition_point(|&o| o <= id) - 1;
        Fact::new(var, id - self.fact_offsets[var])
    }

    pub fn facts(&self) -> impl Iterator<Item = Fact> + '_ {
        self.variables
            .iter()
            .enumerate()
            .flat_map(|(var, v)| (0..v.domain_size()).map(move |val| Fact::new(var, val)))
    }

    pub fn fact_name(&self, fact: Fact) -> &str {
        &self.variables[fact.var].fact_names[fact.val]
    }

    /// Predicate tag of a fact: the part of its name before `(`, or the whole
    /// name when there is none.
    pub fn predicate(&self, fact: Fact) -> &str {
        let name = self.fact_name(fact);
        name.split_once('(').map_or(name, |(p, _)| p)
    }

    /// Effective action cost under the task's metric.
    pub fn cost(&self, op: usize) -> u64 {
        match self.metric {
            Metric::Unit => 1,
            Metric::General => self.operators[op].cost,
        }
    }

    pub fn operator_index(&self, name: &str) -> Option<usize> {
        self.op_by_name.get(name).copied()
    }

    pub fn is_goal(&self, state: &State) -> bool {
        self.goal.holds_in(state)
    }

    pub fn applicable(&self, op: usize, state: &State) -> bool {
        self.operators[op].applicable(state)
    }

    pub fn apply(&self, op: usize, state: &State) -> Result<State, ApplyError> {
        self.operators[op].apply(state)
    }

    /// Operators applicable in `state`, in index order.
    pub fn applicable_ops<'a>(&'a self, state: &'a State) -> impl Iterator<Item = usize> + 'a {
        self.operators
            .iter()
            .enumerate()
            .filter(move |(_, op)| op.applicable(state))
            .map(|(i, _)| i)
    }

    /// Two facts cannot hold together: same variable with different values,
    /// or joint members of a supplied mutex group.
    pub fn inconsistent(&self, a: Fact, b: Fact) -> bool {
        if a.var == b.var {
            return a.val != b.val;
        }
        self.mutex_groups
            .iter()
            .any(|g| g.contains(&a) && g.contains(&b))
    }

    /// Runs `plan` (operator names) from the initial state and returns its
    /// total cost if it reaches the goal.
    pub fn validate_plan<S: AsRef<str>>(&self, plan: &[S]) -> Result<u64, ValidationError> {
        let mut ops = Vec::with_capacity(plan.len());
        for (step, name) in plan.iter().enumerate() {
            let name = name.as_ref();
            let op = self
                .operator_index(name)
                .ok_or_else(|| ValidationError::UnknownOperator {
                    step,
                    name: name.to_string(),
                })?;
            ops.push(op);
        }
        self.validate_op_sequence(&ops)
    }

    pub fn validate_op_sequence(&self, ops: &[usize]) -> Result<u64, ValidationError> {
        let mut state = self.init.clone();
        let mut cost = 0u64;
        for (step, &op) in ops.iter().enumerate() {
            state = self.operators[op].apply(&state).map_err(|_| {
                ValidationError::InapplicableAtStep {
                    step,
                    name: self.operators[op].name.clone(),
                }
            })?;
            cost = cost.saturating_add(self.cost(op));
        }
        if let Some(f) = self.goal.iter().find(|f| !state.holds(**f)) {
            return Err(ValidationError::GoalNotSatisfied {
                fact: *f,
                name: self.fact_name(*f).to_string(),
            });
        }
        Ok(cost)
    }
}
