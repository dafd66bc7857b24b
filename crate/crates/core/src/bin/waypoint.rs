use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use clap::{Parser, Subcommand};

use waypoint::harness::{export_dot, format_score, ipc_score};
use waypoint::heuristics::CostMode;
use waypoint::landmarks::{add_reasonable_orderings, extract_landmark_graph, OrderingKind};
use waypoint::parser::{parse_plan, parse_task, serialize_plan};
use waypoint::search::{anytime_plan, AnytimeConfig, AnytimeOutcome, DEFAULT_BOOST};
use waypoint::Task;

const EXIT_UNSOLVABLE: u8 = 1;
const EXIT_TIMEOUT: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;
const EXIT_CANT_CREATE: u8 = 73;

#[derive(Parser)]
#[command(
    name = "waypoint",
    version,
    about = "Landmark-guided planner for finite-domain tasks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for plans, writing each improvement to the plan file.
    Plan {
        task: PathBuf,
        #[arg(long, default_value = "plus-one")]
        cost_mode: CostMode,
        /// Use the FF heuristic only.
        #[arg(long)]
        no_landmarks: bool,
        /// Weighted A* schedule after the first plan, e.g. 5,3,2,1.
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 5.0, 3.0, 2.0, 1.0])]
        weights: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_BOOST)]
        boost: u64,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long, default_value = "sas_plan")]
        plan_file: PathBuf,
        /// Keep every plan as <plan-file>.1, <plan-file>.2, ...
        #[arg(long)]
        all_plans: bool,
    },
    /// Print landmark and ordering counts.
    Landmarks {
        task: PathBuf,
        /// Write the landmark graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a plan file and print its cost.
    Validate { task: PathBuf, plan: PathBuf },
    /// Score a found plan cost against a reference cost.
    Score {
        #[arg(long)]
        best: u64,
        /// A cost, or `none` if unsolved.
        #[arg(long)]
        found: String,
    },
}

struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_NO_INPUT, format!("{}: {e}", path.display())))
}

fn load_task(path: &Path) -> Result<Task, Failure> {
    parse_task(&read(path)?).map_err(|e| Failure(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(EXIT_CANT_CREATE, format!("{}: {e}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn plan(
    task_path: &Path,
    cost_mode: CostMode,
    no_landmarks: bool,
    weights: Vec<f64>,
    boost: u64,
    time_limit: Option<f64>,
    plan_file: &Path,
    all_plans: bool,
) -> Outcome {
    let config = AnytimeConfig {
        weights,
        boost,
        time_budget: None,
        cost_mode,
        use_landmarks: !no_landmarks,
    };
    config
        .validate()
        .map_err(|e| Failure(EXIT_USAGE, e.to_string()))?;
    let limit = match time_limit {
        Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(Failure(EXIT_USAGE, format!("invalid time limit {s}"))),
        None => None,
    };

    let cancel = Arc::new(AtomicBool::new(false));
    if let Some(limit) = limit {
        let flag = Arc::clone(&cancel);
        thread::spawn(move || {
            thread::sleep(limit);
            flag.store(true, Ordering::Relaxed);
        });
    }

    let task = load_task(task_path)?;
    let graph = config
        .use_landmarks
        .then(|| add_reasonable_orderings(extract_landmark_graph(&task), &task));

    let mut count = 0;
    let mut write_error = None;
    let result = anytime_plan(&task, graph.as_ref(), &config, Some(cancel), |p| {
        count += 1;
        let text = serialize_plan(&p.names(&task), p.cost, task.metric);
        let path = if all_plans {
            PathBuf::from(format!("{}.{count}", plan_file.display()))
        } else {
            plan_file.to_path_buf()
        };
        println!(
            "plan {count}: cost {}, length {}, written to {}",
            p.cost,
            p.len(),
            path.display()
        );
        if let Err(e) = write(&path, &text) {
            write_error.get_or_insert(e);
        }
    })
    .map_err(|e| Failure(EXIT_USAGE, e.to_string()))?;
    if let Some(e) = write_error {
        return Err(e);
    }

    let expansions: u64 = result.runs.iter().map(|r| r.expansions).sum();
    println!("searches: {}, expansions: {expansions}", result.runs.len());
    match (&result.best, result.outcome) {
        (Some(best), AnytimeOutcome::Exhausted) => {
            println!("best cost {} (no cheaper plan exists)", best.cost);
            Ok(0)
        }
        (Some(best), _) => {
            println!("best cost {} (stopped by time limit)", best.cost);
            Ok(0)
        }
        (None, AnytimeOutcome::Interrupted) => {
            println!("time limit reached without a plan");
            Ok(EXIT_TIMEOUT)
        }
        (None, _) => {
            println!("task is unsolvable");
            Ok(EXIT_UNSOLVABLE)
        }
    }
}

fn landmarks(task_path: &Path, dot: Option<&Path>) -> Outcome {
    let task = load_task(task_path)?;
    let graph = add_reasonable_orderings(extract_landmark_graph(&task), &task);
    let disjunctive = graph
        .nodes()
        .iter()
        .filter(|n| n.landmark.is_disjunctive())
        .count();
    println!(
        "landmarks: {} ({} fact, {disjunctive} disjunctive)",
        graph.len(),
        graph.len() - disjunctive
    );
    let counts = graph.ordering_counts();
    let kinds = [
        OrderingKind::Natural,
        OrderingKind::GreedyNecessary,
        OrderingKind::Reasonable,
        OrderingKind::ObedientReasonable,
    ];
    let parts: Vec<String> = kinds
        .iter()
        .map(|&k| format!("{} {}", counts[k as usize], k))
        .collect();
    println!(
        "orderings: {} ({})",
        graph.num_orderings(),
        parts.join(", ")
    );
    if let Some(path) = dot {
        write(path, &export_dot(&graph, &task))?;
    }
    Ok(0)
}

fn validate(task_path: &Path, plan_path: &Path) -> Outcome {
    let task = load_task(task_path)?;
    let names = parse_plan(&read(plan_path)?)
        .map_err(|e| Failure(EXIT_DATA, format!("{}: {e}", plan_path.display())))?;
    match task.validate_plan(&names) {
        Ok(cost) => {
            println!("{cost}");
            Ok(0)
        }
        Err(e) => {
            eprintln!("invalid plan: {e}");
            Ok(1)
        }
    }
}

fn score(best: u64, found: &str) -> Outcome {
    let found = match found {
        "none" => None,
        s => Some(s.parse::<u64>().map_err(|_| {
            Failure(
                EXIT_USAGE,
                format!("--found expects a cost or `none`, got `{s}`"),
            )
        })?),
    };
    let s = ipc_score(found, best).map_err(|e| Failure(EXIT_USAGE, e.to_string()))?;
    println!("{}", format_score(s));
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Plan {
            task,
            cost_mode,
            no_landmarks,
            weights,
            boost,
            time_limit,
            plan_file,
            all_plans,
        } => plan(
            &task,
            cost_mode,
            no_landmarks,
            weights,
            boost,
            time_limit,
            &plan_file,
            all_plans,
        ),
        Command::Landmarks { task, dot } => landmarks(&task, dot.as_deref()),
        Command::Validate { task, plan } => validate(&task, &plan),
        Command::Score { best, found } => score(best, &found),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
