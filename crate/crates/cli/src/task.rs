//! Running one reasoning task through the full pipeline.

use std::fmt;

use elproofs_core::metrics::{metrics_report, MetricsReport, StepWeights};
use elproofs_core::proofs::{validate_proof, BuildProofError, ProofError};
use elproofs_core::ontology::NormalizeError;
use elproofs_core::saturation::SaturationError;
use elproofs_core::{
    build_proof, entails, unravel, Axiom, Calculus, ProofDag, ProofMode, TBox,
};

/// Node cap below which proof trees are materialized for metrics.
pub const TREE_CAP: u128 = 1 << 20;

/// Outcome classes of one (task, calculus) run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The calculus cannot handle a feature of the task (e.g. role chains
    /// under `textbook`).
    Unsupported,
    /// Resource or wall-clock limit hit.
    Limit,
    /// The goal is not entailed by the TBox.
    GoalNotEntailed,
    /// Any other failure (parse errors, invalid proofs, internal errors).
    Error,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Unsupported => "unsupported",
            Status::Limit => "limit",
            Status::GoalNotEntailed => "goal-not-entailed",
            Status::Error => "error",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of [`run_task`]: the proof and report on success, a status and
/// message otherwise.
pub struct TaskOutcome {
    pub status: Status,
    pub message: String,
    pub proof: Option<ProofDag>,
    pub report: Option<MetricsReport>,
}

impl TaskOutcome {
    fn fail(status: Status, message: impl Into<String>) -> Self {
        TaskOutcome { status, message: message.into(), proof: None, report: None }
    }
}

fn classify_saturation_error(e: &SaturationError) -> Status {
    match e {
        SaturationError::Normalize(NormalizeError::Unsupported(_)) => Status::Unsupported,
        SaturationError::ResourceLimit(_) => Status::Limit,
        SaturationError::UnsupportedGoal(_) => Status::Unsupported,
    }
}

/// Entailment check, proof extraction, validation and metrics for one goal.
/// Never panics on reasoner errors; every failure maps to a status.
pub fn run_task(
    tbox: &TBox,
    goal: &Axiom,
    calculus: Calculus,
    mode: ProofMode,
    weights: &StepWeights,
    goal_directed: Option<String>,
) -> TaskOutcome {
    let check = match entails(tbox, calculus, goal) {
        Ok(check) => check,
        Err(e) => return TaskOutcome::fail(classify_saturation_error(&e), e.to_string()),
    };
    if !check.holds {
        return TaskOutcome::fail(Status::GoalNotEntailed, format!("{goal} is not entailed"));
    }
    let mut params = elproofs_core::SaturationParams::default();
    params.goal_directed = goal_directed;
    let dag = match build_proof(tbox, calculus, goal, mode, &params) {
        Ok(dag) => dag,
        Err(BuildProofError::Saturation(e)) => {
            return TaskOutcome::fail(classify_saturation_error(&e), e.to_string())
        }
        Err(BuildProofError::Proof(e)) => {
            let status = match e {
                ProofError::GoalNotDerivable(_) => Status::GoalNotEntailed,
                _ => Status::Error,
            };
            return TaskOutcome::fail(status, format!("proof extraction failed: {e}"));
        }
    };
    let report = validate_proof(&dag, tbox, goal);
    if !report.is_ok() {
        let detail: Vec<String> =
            report.violations.iter().map(|v| v.message.clone()).collect();
        return TaskOutcome::fail(
            Status::Error,
            format!("proof failed validation: {}", detail.join("; ")),
        );
    }
    let tree = unravel(&dag, TREE_CAP);
    let metrics = metrics_report(&tree, weights);
    TaskOutcome {
        status: Status::Ok,
        message: String::new(),
        proof: Some(dag),
        report: Some(metrics),
    }
}
