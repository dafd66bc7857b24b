//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always shown.

mod common;

use std::time::{Duration, Instant};

use common::*;
use waypoint::harness::{brute_force_landmark_oracle, greedy_necessary_oracle, ipc_score, Verdict};
use waypoint::heuristics::{
    lm_count, lm_status_update, CostMode, FfHeuristic, LandmarkStatus, RelaxedTask,
};
use waypoint::landmarks::{
    add_reasonable_orderings, dtg_landmarks, extract_landmark_graph, Landmark, LandmarkGraph,
    OrderingKind, Rrpg,
};
use waypoint::search::{
    anytime_plan, anytime_search, greedy_bfs, run_search, AnytimeConfig, AnytimeOutcome, Budget,
    SearchConfig, SearchKind, SearchOutcome, SearchStats, DEFAULT_BOOST,
};
use waypoint::{dtg::Dtg, Metric, State, Task};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn full_graph(task: &Task) -> LandmarkGraph {
    add_reasonable_orderings(extract_landmark_graph(task), task)
}

/// Random tasks from a fixed seed range, split by solvability.
fn random_tasks(first_seed: u64, count: usize, want_solvable: Option<bool>) -> Vec<Task> {
    let mut out = Vec::new();
    let mut seed = first_seed;
    while out.len() < count {
        let task = random_task(&mut rng(seed), Shape::SMALL);
        seed += 1;
        if want_solvable.is_none_or(|w| solvable(&task) == w) {
            out.push(task);
        }
    }
    out
}

fn criterion_1() -> Check {
    let task = grid_task();
    let budget = Budget::unlimited();
    let weighted = |w: f64, bound: Option<u64>| {
        let mut h = GridHeuristic;
        let kind = SearchKind::Weighted { weight: w, bound };
        run_search(&task, None, &mut [&mut h], kind, DEFAULT_BOOST, &budget).outcome
    };
    let cost = |o: SearchOutcome| match o {
        SearchOutcome::Solved(p) => Some(p.cost),
        _ => None,
    };
    let first = cost(weighted(2.0, None));
    ensure(first == Some(6), || {
        format!("w=2 gave {first:?}, expected 6")
    })?;
    let second = cost(weighted(1.5, Some(6)));
    ensure(second == Some(5), || {
        format!("w=1.5, bound 6 gave {second:?}, expected 5")
    })?;
    let mut emitted = Vec::new();
    let mut h = GridHeuristic;
    anytime_search(
        &task,
        None,
        &mut [&mut h],
        &[2.0, 1.5],
        DEFAULT_BOOST,
        &budget,
        |p| emitted.push(p.cost),
    );
    ensure(emitted == [6, 5], || {
        format!("anytime emitted {emitted:?}, expected [6, 5]")
    })?;
    Ok("w=2 -> 6, w=1.5 bound 6 -> 5, anytime emits [6, 5]".into())
}

fn criterion_2() -> Check {
    let tasks = random_tasks(20_000, 200, Some(true));
    let (mut landmarks, mut arcs, mut disjunctive) = (0, 0, 0);
    for (i, task) in tasks.iter().enumerate() {
        let graph = full_graph(task);
        for node in graph.nodes() {
            landmarks += 1;
            disjunctive += usize::from(node.landmark.is_disjunctive());
            let verdict = brute_force_landmark_oracle(task, &node.landmark, 12);
            ensure(!matches!(verdict, Verdict::Violated(_)), || {
                format!(
                    "task {i}: landmark {} violated: {verdict:?}",
                    node.landmark.label(task)
                )
            })?;
        }
        for o in graph
            .orderings()
            .filter(|o| o.kind == OrderingKind::GreedyNecessary)
        {
            arcs += 1;
            let verdict =
                greedy_necessary_oracle(task, graph.landmark(o.from), graph.landmark(o.to), 12);
            ensure(!matches!(verdict, Verdict::Violated(_)), || {
                format!(
                    "task {i}: arc {} ->gn {} violated: {verdict:?}",
                    graph.landmark(o.from).label(task),
                    graph.landmark(o.to).label(task)
                )
            })?;
        }
        ensure(graph.is_acyclic(), || {
            format!("task {i}: landmark graph has a cycle")
        })?;
    }
    Ok(format!(
        "200 tasks, {landmarks} landmarks ({disjunctive} disjunctive), {arcs} greedy-necessary arcs, 0 violations"
    ))
}

fn criterion_3() -> Check {
    let task = logistics_task();
    let box_at_c = fact_named(&task, "at(box,C)");
    let box_in_t1 = fact_named(&task, "in(box,t1)");
    let box_at_f = fact_named(&task, "at(box,F)");
    let planes = Landmark::disjunction([
        fact_named(&task, "in(box,p1)"),
        fact_named(&task, "in(box,p2)"),
    ]);

    let rrpg = Rrpg::build(&task, &Landmark::fact(box_at_f));
    let from_dtg = dtg_landmarks(&task, &Dtg::build(&task, box_at_f.var), box_at_f, &rrpg);
    ensure(
        from_dtg.contains(&box_at_c) && from_dtg.contains(&box_in_t1),
        || format!("DTG landmarks for at(box,F): {from_dtg:?}"),
    )?;

    let graph = full_graph(&task);
    let has = |l: &Landmark| graph.nodes().iter().any(|n| &n.landmark == l);
    ensure(has(&Landmark::fact(box_at_c)), || {
        "at(box,C) missing".into()
    })?;
    ensure(has(&Landmark::fact(box_in_t1)), || {
        "in(box,t1) missing".into()
    })?;
    ensure(has(&planes), || "in(box,p1) ∨ in(box,p2) missing".into())?;
    Ok(format!(
        "{} landmarks incl. at(box,C), in(box,t1) (both DTG cut values), in(box,p1) ∨ in(box,p2)",
        graph.len()
    ))
}

fn criterion_4() -> Check {
    let mut r = rng(4);
    let mut states = 0;
    let mut dead = 0;
    while states < 500 {
        let task = random_task(&mut r, Shape::TINY_FACTS);
        for _ in 0..5 {
            let state = random_state(&mut r, &task);
            states += 1;
            for mode in CostMode::ALL {
                let relaxed = RelaxedTask::new(&task, mode);
                let expl = relaxed.explore(&task, &state);
                let oracle = bellman_fact_costs(&task, &state, mode);
                ensure(expl.fact_cost == oracle, || {
                    format!(
                        "{mode}: propagated {:?} vs Bellman {oracle:?}",
                        expl.fact_cost
                    )
                })?;
                let eval = FfHeuristic::new(&task, mode).compute(&state);
                let goal: Vec<usize> = task.goal.iter().map(|f| task.fact_id(*f)).collect();
                match relaxed.relaxed_plan(&expl, &goal) {
                    None => {
                        ensure(
                            eval.is_dead_end() && !relaxed_solvable(&task, &state),
                            || "dead end disagrees with relaxed reachability".into(),
                        )?;
                        dead += 1;
                    }
                    Some(plan) => {
                        let reached = delete_free_closure(&task, &state, &plan);
                        ensure(task.goal.iter().all(|f| reached.contains(f)), || {
                            format!("{mode}: relaxed plan {plan:?} misses the goal")
                        })?;
                        ensure(!eval.is_dead_end(), || "finite costs but dead end".into())?;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{states} states x 3 modes exact; {dead} dead-end evaluations"
    ))
}

struct RunLog {
    stats: Vec<SearchStats>,
    boost: u64,
}

fn check_stats(log: &RunLog) -> Result<(), String> {
    for s in &log.stats {
        ensure(s.evaluations <= s.expansions + 1, || {
            format!(
                "{} evaluations for {} expansions",
                s.evaluations, s.expansions
            )
        })?;
        for (q, &added) in s.boost_added.iter().enumerate() {
            let expected = if q % 2 == 1 {
                log.boost * s.progress_events
            } else {
                0
            };
            ensure(added == expected, || {
                format!("queue {q}: boost {added}, expected {expected}")
            })?;
        }
        ensure(s.served_max_priority, || {
            "served a non-maximal queue".into()
        })?;
    }
    Ok(())
}

fn anytime_tasks() -> Vec<Task> {
    let mut tasks = vec![grid_task(), logistics_task()];
    tasks.extend(random_tasks(50_000, 150, Some(true)));
    tasks.extend(random_tasks(60_000, 30, Some(false)));
    tasks
}

fn criterion_5(logs: &mut Vec<RunLog>) -> Check {
    let (mut plans, mut proven) = (0, 0);
    for (i, task) in anytime_tasks().iter().enumerate() {
        let graph = full_graph(task);
        for (mode, use_landmarks, weights) in [
            (CostMode::PlusOne, true, vec![5.0, 3.0, 2.0, 1.0]),
            (CostMode::Pure, false, vec![3.0, 1.5, 1.0]),
            (CostMode::Ignore, true, vec![2.0]),
        ] {
            let config = AnytimeConfig {
                weights,
                cost_mode: mode,
                use_landmarks,
                ..AnytimeConfig::default()
            };
            let mut emitted = Vec::new();
            let result = anytime_plan(task, Some(&graph), &config, None, |p| {
                emitted.push(p.clone())
            })
            .map_err(|e| e.to_string())?;
            for pair in emitted.windows(2) {
                ensure(pair[1].cost < pair[0].cost, || {
                    format!("task {i}: costs {} then {}", pair[0].cost, pair[1].cost)
                })?;
            }
            for p in &emitted {
                plans += 1;
                let ours = task.validate_op_sequence(&p.ops);
                let theirs = interp_validate(task, &p.ops);
                ensure(ours == Ok(p.cost) && theirs == Some(p.cost), || {
                    format!(
                        "task {i}: plan reported at {} validates as {ours:?} / {theirs:?}",
                        p.cost
                    )
                })?;
            }
            let optimum = optimal_cost(task);
            match result.outcome {
                AnytimeOutcome::Unsolvable => {
                    ensure(optimum.is_none() && emitted.is_empty(), || {
                        format!("task {i}: reported unsolvable, optimum {optimum:?}")
                    })?
                }
                AnytimeOutcome::Exhausted => {
                    proven += 1;
                    let best = result.best.as_ref().map(|p| p.cost);
                    ensure(best == optimum, || {
                        format!("task {i}: stopped at {best:?}, optimum {optimum:?}")
                    })?
                }
                AnytimeOutcome::Interrupted => {
                    return Err(format!("task {i}: interrupted without a budget"))
                }
            }
            logs.push(RunLog {
                stats: result.runs,
                boost: config.boost,
            });
        }
    }
    Ok(format!(
        "{plans} emitted plans valid, strictly decreasing; {proven} runs ended at the optimum"
    ))
}

fn criterion_6(logs: &mut Vec<RunLog>) -> Check {
    let tasks = random_tasks(70_000, 400, None);
    let (mut yes, mut no) = (0, 0);
    for (i, task) in tasks.iter().enumerate() {
        let truth = solvable(task);
        if truth {
            yes += 1;
        } else {
            no += 1;
        }
        let graph = full_graph(task);
        for use_landmarks in [true, false] {
            let config = SearchConfig {
                use_landmarks,
                ..SearchConfig::default()
            };
            let result = greedy_bfs(task, Some(&graph), &config, &Budget::unlimited());
            let solved = match &result.outcome {
                SearchOutcome::Solved(p) => {
                    ensure(interp_validate(task, &p.ops) == Some(p.cost), || {
                        format!("task {i}: invalid plan")
                    })?;
                    true
                }
                SearchOutcome::Exhausted => false,
                SearchOutcome::Interrupted => return Err("interrupted".into()),
            };
            ensure(solved == truth, || {
                format!("task {i} (landmarks {use_landmarks}): solved {solved}, solvable {truth}")
            })?;
            if !use_landmarks {
                ensure(result.stats.statuses_built == 0, || {
                    "landmark status built".into()
                })?;
            }
            logs.push(RunLog {
                stats: vec![result.stats],
                boost: config.boost,
            });
        }
    }
    Ok(format!(
        "{yes} solvable solved, {no} unsolvable rejected, with and without landmarks"
    ))
}

fn criterion_7(logs: &[RunLog]) -> Check {
    let mut runs = 0;
    let mut boosts = 0;
    for log in logs {
        check_stats(log)?;
        runs += log.stats.len();
        boosts += log.stats.iter().map(|s| s.progress_events).sum::<u64>();
    }
    Ok(format!("{runs} search runs, {boosts} boosts, ledger exact"))
}

/// Follows a random walk from the initial state, tracking landmark status.
fn walk_states(
    task: &Task,
    graph: &LandmarkGraph,
    r: &mut rand_chacha::ChaCha8Rng,
    len: usize,
) -> Vec<(State, LandmarkStatus)> {
    use rand::Rng;
    let mut state = task.init.clone();
    let mut status = lm_status_update(graph, None, &state);
    let mut out = vec![(state.clone(), status.clone())];
    for _ in 0..len {
        let ops: Vec<usize> = task.applicable_ops(&state).collect();
        if ops.is_empty() {
            break;
        }
        state = task.apply(ops[r.gen_range(0..ops.len())], &state).unwrap();
        status = lm_status_update(graph, Some(&status), &state);
        out.push((state.clone(), status.clone()));
    }
    out
}

fn criterion_8() -> Check {
    let mut r = rng(8);
    let mut states = 0;
    let mut seed = 80_000;
    while states < 100 {
        let mut task = random_task(&mut rng(seed), Shape::SMALL);
        seed += 1;
        task.metric = Metric::Unit;
        let graph = full_graph(&task);
        for (state, status) in walk_states(&task, &graph, &mut r, 4) {
            states += 1;
            let ff = |m| FfHeuristic::new(&task, m).compute(&state).h;
            let (ign, pure, plus) = (
                ff(CostMode::Ignore),
                ff(CostMode::Pure),
                ff(CostMode::PlusOne),
            );
            ensure(ign == pure, || format!("FF ignore {ign} vs pure {pure}"))?;
            ensure(plus == 2.0 * ign, || {
                format!("FF plus-one {plus} vs ignore {ign}")
            })?;
            let lm = |m| lm_count(&graph, &status, &state, m).0;
            let (li, lp) = (lm(CostMode::Ignore), lm(CostMode::Pure));
            ensure(li == lp, || {
                format!("seed {}: LM ignore {li} vs pure {lp}", seed - 1)
            })?;
        }
    }
    Ok(format!(
        "{states} states: ignore = pure for both heuristics, FF plus-one = 2 x ignore"
    ))
}

fn criterion_9() -> Check {
    let cases = [(Some(7), 7, 1.0), (None, 7, 0.0), (Some(14), 7, 0.5)];
    for (found, best, expected) in cases {
        let got = ipc_score(found, best).map_err(|e| e.to_string())?;
        ensure(got == expected, || {
            format!("score({found:?}, {best}) = {got}")
        })?;
    }
    ensure(ipc_score(Some(3), 0).is_err(), || "best 0 accepted".into())?;
    Ok("score(c*, c*) = 1, score(none, c*) = 0, score(2c*, c*) = 0.5".into())
}

fn report(n: u32, name: &str, limit: Option<Duration>, run: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = run();
    let took = start.elapsed();
    let result = result.and_then(|msg| match limit {
        Some(limit) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}")),
        _ => Ok(msg),
    });
    match result {
        Ok(msg) => {
            println!("criterion {n} ({name}): PASS [{took:.2?}] {msg}");
            true
        }
        Err(msg) => {
            println!("criterion {n} ({name}): FAIL [{took:.2?}] {msg}");
            false
        }
    }
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let mut logs = Vec::new();
    let results = [
        report(1, "grid regression", secs(1), criterion_1),
        report(2, "landmark soundness", secs(60), criterion_2),
        report(3, "logistics landmarks", secs(1), criterion_3),
        report(4, "FF/add oracle", secs(30), criterion_4),
        report(5, "anytime monotonicity", None, || criterion_5(&mut logs)),
        report(6, "completeness", secs(60), || criterion_6(&mut logs)),
        report(7, "deferred evaluation", None, || criterion_7(&logs)),
        report(8, "mode consistency", None, criterion_8),
        report(9, "IPC score", None, criterion_9),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
