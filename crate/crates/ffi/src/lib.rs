//! C interface to the waypoint planner.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `_free` function. Every function that can fail returns
//! a [`WpStatus`] and leaves a message for [`wp_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use waypoint::harness::{export_dot, ipc_score};
use waypoint::heuristics::CostMode;
use waypoint::landmarks::{add_reasonable_orderings, extract_landmark_graph};
use waypoint::parser::{parse_plan, parse_task};
use waypoint::search::{anytime_plan, AnytimeConfig, AnytimeOutcome, DEFAULT_BOOST};
use waypoint::Task;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    Unsolvable = 5,
    Timeout = 6,
    InvalidPlan = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WpCostMode {
    Ignore = 0,
    Pure = 1,
    PlusOne = 2,
}

impl From<WpCostMode> for CostMode {
    fn from(m: WpCostMode) -> Self {
        match m {
            WpCostMode::Ignore => CostMode::Ignore,
            WpCostMode::Pure => CostMode::Pure,
            WpCostMode::PlusOne => CostMode::PlusOne,
        }
    }
}

/// Search settings. `weights` may be null to use the default schedule.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct WpPlanOptions {
    pub cost_mode: WpCostMode,
    pub use_landmarks: bool,
    pub boost: u64,
    /// Milliseconds; 0 means no limit.
    pub time_limit_ms: u64,
    pub weights: *const f64,
    pub num_weights: usize,
}

/// A parsed planning task.
pub struct WpTask {
    task: Task,
}

/// The best plan found by [`wp_plan`].
pub struct WpPlan {
    cost: u64,
    steps: Vec<CString>,
    proven: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(status: WpStatus, msg: impl Into<String>) -> WpStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning a panic into [`WpStatus::Panic`].
fn guard(f: impl FnOnce() -> WpStatus) -> WpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == WpStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(WpStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, WpStatus> {
    if p.is_null() {
        return Err(fail(WpStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(WpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn wp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses task text into a new handle stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wp_task_parse(text: *const c_char, out: *mut *mut WpTask) -> WpStatus {
    guard(|| {
        if out.is_null() {
            return fail(WpStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let text = match str_arg(text, "text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_task(text) {
            Ok(task) => {
                *out = Box::into_raw(Box::new(WpTask { task }));
                WpStatus::Ok
            }
            Err(e) => fail(WpStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `task` must come from [`wp_task_parse`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wp_task_free(task: *mut WpTask) {
    if !task.is_null() {
        drop(Box::from_raw(task));
    }
}

#[no_mangle]
pub extern "C" fn wp_plan_options_default() -> WpPlanOptions {
    WpPlanOptions {
        cost_mode: WpCostMode::PlusOne,
        use_landmarks: true,
        boost: DEFAULT_BOOST,
        time_limit_ms: 0,
        weights: ptr::null(),
        num_weights: 0,
    }
}

/// Runs the anytime search and stores the cheapest plan found in `*out`.
/// Returns [`WpStatus::Unsolvable`] or [`WpStatus::Timeout`] with `*out`
/// null when no plan was found.
///
/// # Safety
/// `task` must be a live handle; `options` may be null for defaults;
/// `weights` must point to `num_weights` doubles if non-null.
#[no_mangle]
pub unsafe extern "C" fn wp_plan(
    task: *const WpTask,
    options: *const WpPlanOptions,
    out: *mut *mut WpPlan,
) -> WpStatus {
    guard(|| {
        if task.is_null() || out.is_null() {
            return fail(WpStatus::NullPointer, "task or out is null");
        }
        *out = ptr::null_mut();
        let task = &(*task).task;
        let opts = if options.is_null() {
            wp_plan_options_default()
        } else {
            *options
        };
        let mut config = AnytimeConfig {
            cost_mode: opts.cost_mode.into(),
            use_landmarks: opts.use_landmarks,
            boost: opts.boost,
            time_budget: (opts.time_limit_ms > 0)
                .then(|| Duration::from_millis(opts.time_limit_ms)),
            ..AnytimeConfig::default()
        };
        if !opts.weights.is_null() {
            config.weights = std::slice::from_raw_parts(opts.weights, opts.num_weights).to_vec();
        }
        if let Err(e) = config.validate() {
            return fail(WpStatus::InvalidArgument, e.to_string());
        }
        let graph = config
            .use_landmarks
            .then(|| add_reasonable_orderings(extract_landmark_graph(task), task));
        let result = match anytime_plan(task, graph.as_ref(), &config, None, |_| {}) {
            Ok(r) => r,
            Err(e) => return fail(WpStatus::InvalidArgument, e.to_string()),
        };
        match result.best {
            Some(plan) => {
                let steps = plan
                    .names(task)
                    .into_iter()
                    .map(|n| CString::new(n).unwrap_or_default())
                    .collect();
                *out = Box::into_raw(Box::new(WpPlan {
                    cost: plan.cost,
                    steps,
                    proven: result.outcome == AnytimeOutcome::Exhausted,
                }));
                WpStatus::Ok
            }
            None if result.outcome == AnytimeOutcome::Interrupted => {
                fail(WpStatus::Timeout, "time limit reached without a plan")
            }
            None => fail(WpStatus::Unsolvable, "task is unsolvable"),
        }
    })
}

/// # Safety
/// `plan` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_plan_cost(plan: *const WpPlan) -> u64 {
    plan.as_ref().map_or(0, |p| p.cost)
}

/// # Safety
/// `plan` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_plan_len(plan: *const WpPlan) -> usize {
    plan.as_ref().map_or(0, |p| p.steps.len())
}

/// True if the search proved that no cheaper plan exists.
///
/// # Safety
/// `plan` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_plan_is_proven(plan: *const WpPlan) -> bool {
    plan.as_ref().is_some_and(|p| p.proven)
}

/// Operator name of step `i`, or null if out of range. Owned by the plan.
///
/// # Safety
/// `plan` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wp_plan_step_name(plan: *const WpPlan, i: usize) -> *const c_char {
    plan.as_ref()
        .and_then(|p| p.steps.get(i))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// # Safety
/// `plan` must come from [`wp_plan`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wp_plan_free(plan: *mut WpPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Checks plan text (one `(name)` per line) against the task and stores its
/// cost in `*cost`.
///
/// # Safety
/// `task` must be a live handle, `plan_text` NUL-terminated, `cost` valid.
#[no_mangle]
pub unsafe extern "C" fn wp_validate(
    task: *const WpTask,
    plan_text: *const c_char,
    cost: *mut u64,
) -> WpStatus {
    guard(|| {
        if task.is_null() || cost.is_null() {
            return fail(WpStatus::NullPointer, "task or cost is null");
        }
        let text = match str_arg(plan_text, "plan_text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let names = match parse_plan(text) {
            Ok(n) => n,
            Err(e) => return fail(WpStatus::ParseError, e.to_string()),
        };
        match (*task).task.validate_plan(&names) {
            Ok(c) => {
                *cost = c;
                WpStatus::Ok
            }
            Err(e) => fail(WpStatus::InvalidPlan, e.to_string()),
        }
    })
}

/// The landmark graph in DOT format. Free the string with [`wp_string_free`].
///
/// # Safety
/// `task` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn wp_landmarks_dot(task: *const WpTask, out: *mut *mut c_char) -> WpStatus {
    guard(|| {
        if task.is_null() || out.is_null() {
            return fail(WpStatus::NullPointer, "task or out is null");
        }
        let task = &(*task).task;
        let graph = add_reasonable_orderings(extract_landmark_graph(task), task);
        *out = to_c_string(export_dot(&graph, task));
        WpStatus::Ok
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn wp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Score of a run: `best / found` capped at 1, or 0 when `solved` is false.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wp_ipc_score(
    solved: bool,
    found: u64,
    best: u64,
    out: *mut f64,
) -> WpStatus {
    guard(|| {
        if out.is_null() {
            return fail(WpStatus::NullPointer, "out is null");
        }
        match ipc_score(solved.then_some(found), best) {
            Ok(s) => {
                *out = s;
                WpStatus::Ok
            }
            Err(e) => fail(WpStatus::InvalidArgument, e.to_string()),
        }
    })
}
