//! Benchmark suites: one directory per task with `tbox.elt` and `goal.elt`,
//! run across calculi with per-task timeouts, emitted as CSV.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use elproofs_core::metrics::StepWeights;
use elproofs_core::ontology::{parse_axiom, parse_tbox};
use elproofs_core::{Axiom, Calculus, ProofMode, TBox};

use crate::formats::decimal4;
use crate::task::{run_task, Status};

pub const CSV_HEADER: &str =
    "task,calculus,mode,status,size,depth,justification,bushiness,cutwidth,avg_step_complexity,runtime_ms";

/// One suite entry, loaded from `DIR/<id>/{tbox.elt,goal.elt}`.
pub struct Task {
    pub id: String,
    pub tbox: TBox,
    pub goal: Axiom,
}

/// One CSV row; metric columns are empty unless `status` is `ok`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultRow {
    pub task: String,
    pub calculus: Calculus,
    pub mode: ProofMode,
    pub status: Status,
    pub metrics: Option<RowMetrics>,
    pub runtime_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowMetrics {
    pub size: u128,
    pub depth: u64,
    pub justification: usize,
    pub bushiness: String,
    pub cutwidth: u64,
    pub avg_step_complexity: String,
}

impl ResultRow {
    pub fn to_csv(&self) -> String {
        let (size, depth, justification, bushiness, cutwidth, avg) = match &self.metrics {
            Some(m) => (
                m.size.to_string(),
                m.depth.to_string(),
                m.justification.to_string(),
                m.bushiness.clone(),
                m.cutwidth.to_string(),
                m.avg_step_complexity.clone(),
            ),
            None => Default::default(),
        };
        format!(
            "{},{},{},{},{size},{depth},{justification},{bushiness},{cutwidth},{avg},{}",
            self.task,
            self.calculus.name(),
            self.mode.name(),
            self.status.name(),
            self.runtime_ms
        )
    }
}

/// Loads every task directory of a suite, sorted by id.
pub fn load_suite(dir: &Path) -> Result<Vec<Task>, String> {
    let mut ids: Vec<(String, PathBuf)> = Vec::new();
    let entries =
        fs::read_dir(dir).map_err(|e| format!("cannot read suite {}: {e}", dir.display()))?;
    for entry in entries {
        let entry = entry.map_err(|e| format!("cannot read suite {}: {e}", dir.display()))?;
        let path = entry.path();
        if path.is_dir() {
            let id = entry.file_name().to_string_lossy().into_owned();
            ids.push((id, path));
        }
    }
    ids.sort();
    if ids.is_empty() {
        return Err(format!("suite {} contains no task directories", dir.display()));
    }
    let mut tasks = Vec::with_capacity(ids.len());
    for (id, path) in ids {
        tasks.push(load_task(&id, &path)?);
    }
    Ok(tasks)
}

pub fn load_task(id: &str, dir: &Path) -> Result<Task, String> {
    let tbox_path = dir.join("tbox.elt");
    let goal_path = dir.join("goal.elt");
    let tbox_text = fs::read_to_string(&tbox_path)
        .map_err(|e| format!("cannot read {}: {e}", tbox_path.display()))?;
    let goal_text = fs::read_to_string(&goal_path)
        .map_err(|e| format!("cannot read {}: {e}", goal_path.display()))?;
    let tbox =
        parse_tbox(&tbox_text).map_err(|e| format!("{}: {e}", tbox_path.display()))?;
    let goal_line = goal_text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| format!("{}: no axiom line", goal_path.display()))?;
    let goal =
        parse_axiom(goal_line).map_err(|e| format!("{}: {e}", goal_path.display()))?;
    Ok(Task { id: id.to_string(), tbox, goal })
}

pub struct BenchConfig {
    pub calculi: Vec<Calculus>,
    pub mode: ProofMode,
    pub jobs: usize,
    pub timeout: Duration,
    /// Report `runtime_ms` as 0 so reruns are byte-identical.
    pub deterministic: bool,
    pub weights: StepWeights,
}

/// Runs every (task, calculus) job, in parallel up to `jobs` workers, and
/// returns rows sorted by (task id, calculus name).
pub fn run_benchmark(tasks: &[Task], config: &BenchConfig) -> Vec<ResultRow> {
    let mut jobs: Vec<(usize, Calculus)> = Vec::new();
    for t in 0..tasks.len() {
        for &calc in &config.calculi {
            jobs.push((t, calc));
        }
    }
    let results: Mutex<Vec<Option<ResultRow>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let workers = config.jobs.max(1).min(jobs.len());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::SeqCst);
                if j >= jobs.len() {
                    return;
                }
                let (t, calc) = jobs[j];
                let row = run_with_timeout(&tasks[t], calc, config);
                results.lock().expect("no poisoned lock")[j] = Some(row);
            });
        }
    });
    let mut rows: Vec<ResultRow> = results
        .into_inner()
        .expect("no poisoned lock")
        .into_iter()
        .map(|r| r.expect("all jobs ran"))
        .collect();
    rows.sort_by(|a, b| {
        (&a.task, a.calculus.name()).cmp(&(&b.task, b.calculus.name()))
    });
    rows
}

/// Runs one job on a dedicated thread and abandons it on timeout (the
/// reasoner has no cancellation points; the thread is detached).
fn run_with_timeout(task: &Task, calculus: Calculus, config: &BenchConfig) -> ResultRow {
    let (sender, receiver) = mpsc::channel();
    let tbox = task.tbox.clone();
    let goal = task.goal.clone();
    let mode = config.mode;
    let weights = config.weights.clone();
    let start = Instant::now();
    thread::spawn(move || {
        let outcome = run_task(&tbox, &goal, calculus, mode, &weights, None);
        let _ = sender.send(outcome);
    });
    let (status, metrics) = match receiver.recv_timeout(config.timeout) {
        Ok(outcome) => {
            let metrics = outcome.report.as_ref().map(|r| RowMetrics {
                size: r.size,
                depth: r.depth,
                justification: r.justification_size,
                bushiness: decimal4(&r.bushiness),
                cutwidth: r.cutwidth,
                avg_step_complexity: decimal4(&r.avg_step_complexity),
            });
            (outcome.status, metrics)
        }
        Err(_) => (Status::Limit, None),
    };
    let runtime_ms = if config.deterministic { 0 } else { start.elapsed().as_millis() };
    ResultRow {
        task: task.id.clone(),
        calculus,
        mode: config.mode,
        status,
        metrics,
        runtime_ms,
    }
}

pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// Per-status counts for the end-of-run summary, in a fixed status order.
pub fn summarize(rows: &[ResultRow]) -> String {
    let statuses = [
        Status::Ok,
        Status::Unsupported,
        Status::Limit,
        Status::GoalNotEntailed,
        Status::Error,
    ];
    let parts: Vec<String> = statuses
        .iter()
        .map(|s| format!("{}={}", s.name(), rows.iter().filter(|r| r.status == *s).count()))
        .collect();
    format!("{} rows: {}", rows.len(), parts.join(" "))
}
