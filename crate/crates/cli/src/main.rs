//! `elproofs` — classification, proof extraction, shape metrics and
//! benchmarks for EL-family ontologies.

mod bench;
mod compare;
mod formats;
mod task;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use elproofs_core::metrics::{metrics_report, StepWeights};
use elproofs_core::ontology::{parse_axiom, parse_tbox};
use elproofs_core::{classify, unravel, Axiom, Calculus, ProofMode, TBox};

use bench::{load_suite, rows_to_csv, run_benchmark, summarize, BenchConfig};
use task::{run_task, Status, TREE_CAP};

#[derive(Parser)]
#[command(name = "elproofs", version, about = "EL-family reasoning, proofs and shape metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a proof of a single goal axiom.
    Prove {
        /// Ontology file (.elt).
        #[arg(long)]
        tbox: PathBuf,
        /// Goal axiom, e.g. "SubClassOf(A B)".
        #[arg(long)]
        goal: String,
        #[arg(long)]
        calculus: String,
        /// Extraction mode: minimal | first.
        #[arg(long, default_value = "minimal")]
        mode: String,
        /// Restrict elk saturation to facts reachable from the goal's
        /// left-hand side.
        #[arg(long)]
        goal_directed: bool,
        /// Output path for the proof JSON (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print all entailed subsumptions between concept names.
    Classify {
        #[arg(long)]
        tbox: PathBuf,
        #[arg(long)]
        calculus: String,
    },
    /// Compute shape metrics of a stored proof.
    Metrics {
        /// Proof JSON produced by `prove`.
        #[arg(long)]
        proof: PathBuf,
        /// Optional step-complexity weight overrides (JSON).
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Run a task suite across calculi and write a results CSV.
    Bench {
        /// Suite directory: one sub-directory per task with `tbox.elt` and
        /// `goal.elt`.
        #[arg(long)]
        tasks: PathBuf,
        /// Comma-separated calculi to run.
        #[arg(long, default_value = "elk,textbook,envelope")]
        calculi: String,
        #[arg(long, default_value = "minimal")]
        mode: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Parallel worker count.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Per-task wall-clock limit in seconds.
        #[arg(long, default_value_t = 30)]
        timeout: u64,
        /// Report runtime_ms as 0 so reruns are byte-identical.
        #[arg(long)]
        deterministic: bool,
        /// Optional step-complexity weight overrides (JSON).
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Pairwise comparison of a results CSV on one metric.
    Compare {
        /// CSV produced by `bench`.
        #[arg(long)]
        results: PathBuf,
        /// size | depth | cutwidth | bushiness | avgStepComplexity.
        #[arg(long)]
        metric: String,
        /// Base path for per-pair two-column scatter data files.
        #[arg(long)]
        scatter: Option<PathBuf>,
        /// Base path for per-pair SVG scatter plots.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

/// Errors mapped to exit codes: usage/IO → 1, failed tasks → 2.
enum CliError {
    Usage(String),
    Task(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Task(_) => ExitCode::from(2),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Task(m) => m,
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Prove { tbox, goal, calculus, mode, goal_directed, out } => {
            cmd_prove(&tbox, &goal, &calculus, &mode, goal_directed, out.as_deref())
        }
        Command::Classify { tbox, calculus } => cmd_classify(&tbox, &calculus),
        Command::Metrics { proof, weights } => cmd_metrics(&proof, weights.as_deref()),
        Command::Bench { tasks, calculi, mode, out, jobs, timeout, deterministic, weights } => {
            cmd_bench(&tasks, &calculi, &mode, &out, jobs, timeout, deterministic, weights.as_deref())
        }
        Command::Compare { results, metric, scatter, svg } => {
            cmd_compare(&results, &metric, scatter.as_deref(), svg.as_deref())
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_calculus(name: &str) -> Result<Calculus, CliError> {
    Calculus::from_name(name)
        .ok_or_else(|| usage(format!("unknown calculus {name:?}; expected elk, textbook or envelope")))
}

fn parse_mode(name: &str) -> Result<ProofMode, CliError> {
    ProofMode::from_name(name)
        .ok_or_else(|| usage(format!("unknown mode {name:?}; expected minimal or first")))
}

fn load_tbox(path: &Path) -> Result<TBox, CliError> {
    let text = read_file(path)?;
    parse_tbox(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_weights(path: Option<&Path>) -> Result<StepWeights, CliError> {
    match path {
        None => Ok(StepWeights::default()),
        Some(p) => {
            let text = read_file(p)?;
            formats::weights_from_json(&text).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
    }
}

fn cmd_prove(
    tbox_path: &Path,
    goal_text: &str,
    calculus: &str,
    mode: &str,
    goal_directed: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let tbox = load_tbox(tbox_path)?;
    let calculus = parse_calculus(calculus)?;
    let mode = parse_mode(mode)?;
    let goal: Axiom =
        parse_axiom(goal_text).map_err(|e| usage(format!("bad goal axiom: {e}")))?;
    let directed = if goal_directed {
        match &goal {
            Axiom::ConceptInclusion(elproofs_core::Concept::Named(name), _) => Some(name.clone()),
            _ => None,
        }
    } else {
        None
    };
    let outcome = run_task(&tbox, &goal, calculus, mode, &StepWeights::default(), directed);
    let Some(proof) = outcome.proof else {
        return Err(CliError::Task(format!("{}: {}", outcome.status, outcome.message)));
    };
    let json = formats::proof_to_json(&proof);
    match out {
        Some(path) => {
            write_file(path, &json)?;
            eprintln!(
                "proof of {goal} ({calculus}, {} vertices) written to {}",
                proof.vertices.len(),
                path.display()
            );
        }
        None => print!("{json}"),
    }
    Ok(())
}

fn cmd_classify(tbox_path: &Path, calculus: &str) -> Result<(), CliError> {
    let tbox = load_tbox(tbox_path)?;
    let calculus = parse_calculus(calculus)?;
    let pairs = classify(&tbox, calculus)
        .map_err(|e| CliError::Task(format!("classification failed: {e}")))?;
    for (a, b) in &pairs {
        println!("SubClassOf({a} {b})");
    }
    Ok(())
}

fn cmd_metrics(proof_path: &Path, weights_path: Option<&Path>) -> Result<(), CliError> {
    let text = read_file(proof_path)?;
    let dag = formats::proof_from_json(&text)
        .map_err(|e| usage(format!("{}: {e}", proof_path.display())))?;
    let weights = load_weights(weights_path)?;
    let tree = unravel(&dag, TREE_CAP);
    let report = metrics_report(&tree, &weights);
    print!("{}", formats::metrics_to_json(&report));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    tasks_dir: &Path,
    calculi: &str,
    mode: &str,
    out: &Path,
    jobs: usize,
    timeout: u64,
    deterministic: bool,
    weights_path: Option<&Path>,
) -> Result<(), CliError> {
    let mut parsed = Vec::new();
    for name in calculi.split(',') {
        let calc = parse_calculus(name.trim())?;
        if !parsed.contains(&calc) {
            parsed.push(calc);
        }
    }
    if parsed.is_empty() {
        return Err(usage("no calculi selected"));
    }
    let config = BenchConfig {
        calculi: parsed,
        mode: parse_mode(mode)?,
        jobs,
        timeout: Duration::from_secs(timeout),
        deterministic,
        weights: load_weights(weights_path)?,
    };
    let tasks = load_suite(tasks_dir).map_err(usage)?;
    let rows = run_benchmark(&tasks, &config);
    write_file(out, &rows_to_csv(&rows))?;
    println!("{}", summarize(&rows));
    if rows.iter().any(|r| r.status == Status::Error) {
        return Err(CliError::Task("some tasks errored; see the CSV".into()));
    }
    Ok(())
}

/// `base.ext` → `base_left_right.ext` for per-pair output files.
fn pair_path(base: &Path, pair: &(String, String)) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = base
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    base.with_file_name(format!("{stem}_{}_{}{ext}", pair.0, pair.1))
}

fn cmd_compare(
    results: &Path,
    metric: &str,
    scatter: Option<&Path>,
    svg: Option<&Path>,
) -> Result<(), CliError> {
    let text = read_file(results)?;
    let rows = compare::parse_results(&text, metric).map_err(usage)?;
    let (table, points) = compare::compare_results(&rows);
    if table.is_empty() {
        println!("fewer than two calculi in {}; nothing to compare", results.display());
    }
    for counts in &table {
        println!(
            "({}, {}) {metric}: higher={} lower={} equal={}",
            counts.left, counts.right, counts.higher, counts.lower, counts.equal
        );
    }
    for (pair, pts) in &points {
        if let Some(base) = scatter {
            let path = pair_path(base, pair);
            write_file(&path, &compare::scatter_dat(pair, pts))?;
            eprintln!("scatter data for ({}, {}) written to {}", pair.0, pair.1, path.display());
        }
        if let Some(base) = svg {
            let path = pair_path(base, pair);
            write_file(&path, &compare::scatter_svg(pair, metric, pts))?;
            eprintln!("scatter plot for ({}, {}) written to {}", pair.0, pair.1, path.display());
        }
    }
    Ok(())
}
