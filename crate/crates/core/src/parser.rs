//! The line-oriented task format and the plan file format.
//!
//! ```text
//! fdr 1
//! metric unit|general
//! vars N
//! var <domain-size>          (then one fact name per line)
//! mutexes M
//! group K                    (then K lines `<var> <val>`)
//! init                       (then N lines, one value per variable)
//! goal G                     (then G lines `<var> <val>`)
//! ops O
//! op <cost> <name...>
//! pre P                      (then P lines `<var> <val>`)
//! eff E                      (then E lines `<c> [<cvar> <cval>]*c <var> <newval>`)
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::ParseError;
use crate::task::{Effect, Fact, Metric, Operator, PartialAssignment, State, Task, Variable};

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines: Vec<&str> = text
            .split('\n')
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .collect();
        if lines.last() == Some(&"") {
            lines.pop();
        }
        Self { lines, pos: 0 }
    }

    /// 1-based number of the line most recently returned.
    fn line_no(&self) -> usize {
        self.pos
    }

    fn next(&mut self, what: &str) -> Result<&'a str, ParseError> {
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok(l)
            }
            None => Err(ParseError::Syntax {
                line: self.pos + 1,
                msg: format!("unexpected end of input, expected {what}"),
            }),
        }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line_no(),
            msg: msg.into(),
        }
    }

    fn out_of_range(&self, msg: impl Into<String>) -> ParseError {
        ParseError::IndexOutOfRange {
            line: self.line_no(),
            msg: msg.into(),
        }
    }

    fn number(&self, tok: &str) -> Result<usize, ParseError> {
        tok.parse::<usize>()
            .map_err(|_| self.syntax(format!("expected a non-negative integer, found `{tok}`")))
    }

    /// A line of the form `<keyword> <count>`.
    fn header(&mut self, keyword: &str) -> Result<usize, ParseError> {
        let line = self.next(keyword)?;
        let mut toks = line.split(' ');
        if toks.next() != Some(keyword) {
            return Err(self.syntax(format!("expected `{keyword} <n>`, found `{line}`")));
        }
        let n = toks
            .next()
            .ok_or_else(|| self.syntax(format!("missing count after `{keyword}`")))?;
        let n = self.number(n)?;
        if toks.next().is_some() {
            return Err(self.syntax(format!("trailing tokens after `{keyword} {n}`")));
        }
        Ok(n)
    }

    fn keyword(&mut self, keyword: &str) -> Result<(), ParseError> {
        let line = self.next(keyword)?;
        if line != keyword {
            return Err(self.syntax(format!("expected `{keyword}`, found `{line}`")));
        }
        Ok(())
    }
}

struct Parser<'a> {
    lines: Lines<'a>,
    domains: Vec<usize>,
}

impl<'a> Parser<'a> {
    fn fact(&self, var: usize, val: usize) -> Result<Fact, ParseError> {
        let Some(&size) = self.domains.get(var) else {
            return Err(self
                .lines
                .out_of_range(format!("variable {var} (task has {})", self.domains.len())));
        };
        if val >= size {
            return Err(self.lines.out_of_range(format!(
                "value {val} of variable {var} (domain size {size})"
            )));
        }
        Ok(Fact::new(var, val))
    }

    fn fact_line(&mut self) -> Result<Fact, ParseError> {
        let line = self.lines.next("`<var> <val>`")?;
        let toks: Vec<&str> = line.split(' ').collect();
        if toks.len() != 2 {
            return Err(self
                .lines
                .syntax(format!("expected `<var> <val>`, found `{line}`")));
        }
        let var = self.lines.number(toks[0])?;
        let val = self.lines.number(toks[1])?;
        self.fact(var, val)
    }

    fn assignment(&mut self, keyword: &str) -> Result<PartialAssignment, ParseError> {
        let n = self.lines.header(keyword)?;
        let mut pa = PartialAssignment::new();
        for _ in 0..n {
            let f = self.fact_line()?;
            pa.push(f).map_err(|f| ParseError::DuplicateVariable {
                line: self.lines.line_no(),
                var: f.var,
            })?;
        }
        Ok(pa)
    }

    fn effect_line(&mut self) -> Result<Effect, ParseError> {
        let line = self.lines.next("an effect line")?;
        let toks: Vec<&str> = line.split(' ').collect();
        let bad = || self.lines.syntax(format!("malformed effect `{line}`"));
        let c = self.lines.number(toks.first().ok_or_else(bad)?)?;
        if toks.len() != 1 + 2 * c + 2 {
            return Err(bad());
        }
        let mut cond = PartialAssignment::new();
        for i in 0..c {
            let var = self.lines.number(toks[1 + 2 * i])?;
            let val = self.lines.number(toks[2 + 2 * i])?;
            let f = self.fact(var, val)?;
            cond.push(f).map_err(|f| ParseError::DuplicateVariable {
                line: self.lines.line_no(),
                var: f.var,
            })?;
        }
        let var = self.lines.number(toks[1 + 2 * c])?;
        let val = self.lines.number(toks[2 + 2 * c])?;
        let f = self.fact(var, val)?;
        Ok(Effect {
            cond,
            var: f.var,
            newval: f.val,
        })
    }

    fn parse(mut self) -> Result<Task, ParseError> {
        let l = &mut self.lines;
        let first = l.next("`fdr 1`")?;
        if first != "fdr 1" {
            return Err(l.syntax(format!("expected `fdr 1`, found `{first}`")));
        }
        let metric = match l.next("metric")? {
            "metric unit" => Metric::Unit,
            "metric general" => Metric::General,
            other => {
                return Err(l.syntax(format!("expected `metric unit|general`, found `{other}`")))
            }
        };

        let n_vars = l.header("vars")?;
        let mut variables = Vec::with_capacity(n_vars);
        let mut seen_names = HashSet::new();
        for _ in 0..n_vars {
            let size = l.header("var")?;
            if size == 0 {
                return Err(l.syntax("variable with empty domain"));
            }
            let mut names = Vec::with_capacity(size);
            for _ in 0..size {
                let name = l.next("a fact name")?;
                if name.is_empty() {
                    return Err(l.syntax("empty fact name"));
                }
                if !seen_names.insert(name) {
                    return Err(ParseError::DuplicateFactName {
                        line: l.line_no(),
                        name: name.to_string(),
                    });
                }
                names.push(name.to_string());
            }
            variables.push(Variable { fact_names: names });
        }
        self.domains = variables.iter().map(Variable::domain_size).collect();

        let n_groups = self.lines.header("mutexes")?;
        let mut mutex_groups = Vec::with_capacity(n_groups);
        for _ in 0..n_groups {
            let k = self.lines.header("group")?;
            if k < 2 {
                return Err(self.lines.syntax("a mutex group needs at least two facts"));
            }
            let mut group = Vec::with_capacity(k);
            for _ in 0..k {
                group.push(self.fact_line()?);
            }
            mutex_groups.push(group);
        }

        self.lines.keyword("init")?;
        let mut init = Vec::with_capacity(n_vars);
        for var in 0..n_vars {
            let line = self.lines.next("an initial value")?;
            let val = self.lines.number(line)?;
            self.fact(var, val)?;
            init.push(val);
        }

        let goal = self.assignment("goal")?;

        let n_ops = self.lines.header("ops")?;
        let mut operators = Vec::with_capacity(n_ops);
        for _ in 0..n_ops {
            let line = self.lines.next("`op <cost> <name>`")?;
            let mut parts = line.splitn(3, ' ');
            if parts.next() != Some("op") {
                return Err(self
                    .lines
                    .syntax(format!("expected `op <cost> <name>`, found `{line}`")));
            }
            let cost = parts
                .next()
                .ok_or_else(|| self.lines.syntax("missing operator cost"))?;
            let cost = cost
                .parse::<u64>()
                .map_err(|_| self.lines.syntax(format!("bad operator cost `{cost}`")))?;
            let name = parts.next().unwrap_or("");
            if name.is_empty() {
                return Err(self.lines.syntax("missing operator name"));
            }
            let pre = self.assignment("pre")?;
            let n_eff = self.lines.header("eff")?;
            let mut effects = Vec::with_capacity(n_eff);
            for _ in 0..n_eff {
                effects.push(self.effect_line()?);
            }
            operators.push(Operator {
                name: name.to_string(),
                pre,
                effects,
                cost,
            });
        }
        if self.lines.pos < self.lines.lines.len() {
            self.lines.pos += 1;
            return Err(self
                .lines
                .syntax("trailing content after the last operator"));
        }

        Ok(Task::new(
            variables,
            mutex_groups,
            State::new(init),
            goal,
            operators,
            metric,
        ))
    }
}

/// Parses a task file.
pub fn parse_task(text: &str) -> Result<Task, ParseError> {
    Parser {
        lines: Lines::new(text),
        domains: Vec::new(),
    }
    .parse()
}

/// Emits a task in the format read by [`parse_task`].
pub fn write_task(task: &Task) -> String {
    let mut out = String::new();
    let fact = |out: &mut String, f: &Fact| {
        let _ = writeln!(out, "{} {}", f.var, f.val);
    };
    let _ = writeln!(out, "fdr 1\nmetric {}", task.metric.as_str());
    let _ = writeln!(out, "vars {}", task.variables.len());
    for v in &task.variables {
        let _ = writeln!(out, "var {}", v.domain_size());
        for name in &v.fact_names {
            let _ = writeln!(out, "{name}");
        }
    }
    let _ = writeln!(out, "mutexes {}", task.mutex_groups.len());
    for g in &task.mutex_groups {
        let _ = writeln!(out, "group {}", g.len());
        g.iter().for_each(|f| fact(&mut out, f));
    }
    out.push_str("init\n");
    for v in task.init.values() {
        let _ = writeln!(out, "{v}");
    }
    let _ = writeln!(out, "goal {}", task.goal.len());
    task.goal.iter().for_each(|f| fact(&mut out, f));
    let _ = writeln!(out, "ops {}", task.operators.len());
    for op in &task.operators {
        let _ = writeln!(out, "op {} {}", op.cost, op.name);
        let _ = writeln!(out, "pre {}", op.pre.len());
        op.pre.iter().for_each(|f| fact(&mut out, f));
        let _ = writeln!(out, "eff {}", op.effects.len());
        for e in &op.effects {
            let _ = write!(out, "{}", e.cond.len());
            for c in e.cond.iter() {
                let _ = write!(out, " {} {}", c.var, c.val);
            }
            let _ = writeln!(out, " {} {}", e.var, e.newval);
        }
    }
    out
}

/// One `(name)` line per step, then `; cost = <cost> (<metric> cost)`.
pub fn serialize_plan<S: AsRef<str>>(plan: &[S], cost: u64, metric: Metric) -> String {
    let mut out = String::new();
    for name in plan {
        let _ = writeln!(out, "({})", name.as_ref());
    }
    let _ = writeln!(out, "; cost = {cost} ({} cost)", metric.as_str());
    out
}

/// Reads operator names back from a plan file. Blank lines and `;` comments
/// are skipped.
pub fn parse_plan(text: &str) -> Result<Vec<String>, ParseError> {
    let mut names = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        let name = line
            .strip_prefix('(')
            .and_then(|l| l.strip_suffix(')'))
            .ok_or_else(|| ParseError::Syntax {
                line: i + 1,
                msg: format!("expected `(<operator name>)`, found `{line}`"),
            })?;
        names.push(name.trim().to_string());
    }
    Ok(names)
}
