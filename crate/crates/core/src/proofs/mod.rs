//! From derivation graphs to DL-level proofs.
//!
//! The pipeline has three stages:
//!
//! 1. [`lift_to_dl`] turns the saturation-level [`DerivationGraph`] into a
//!    [`DlGraph`] whose vertices are denormalized DL axioms: `… ∈ T` side
//!    conditions become leaf premises, `r ⊑* s` side conditions become
//!    derived `r ⊑ s` premises, `init` facts and alias-definition
//!    trivialities are spliced out, and identity steps are collapsed.
//! 2. [`extract_min_proof`] / [`extract_first_proof`] pick one derivation per
//!    axiom (minimizing unraveled tree size, or taking the first recorded
//!    one) and emit the reachable part as a [`ProofDag`].
//! 3. [`validate_proof`] re-checks a proof against the input TBox: root,
//!    leaves, acyclicity, label uniqueness and per-step soundness.

mod extract;
mod lift;
mod validate;

pub use extract::{extract_first_proof, extract_min_proof, unravel, ProofDag, ProofTree, ProofVertex, TreeNode};
pub use lift::{lift_to_dl, DlDerivation, DlGraph, DlId};
pub use validate::{validate_proof, ValidationReport, Violation};

use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::ontology::{normalize, Axiom, Calculus, Concept, DenormalizeError, TBox};
use crate::saturation::{saturate_with, DerivationGraph, SaturationError, SaturationParams};

/// Which derivation to choose per axiom during extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofMode {
    /// Minimize unraveled tree size (ties: depth, then premise labels).
    Minimal,
    /// Use the first recorded derivation per axiom (single-trace bias).
    First,
}

impl ProofMode {
    pub fn name(&self) -> &'static str {
        match self {
            ProofMode::Minimal => "minimal",
            ProofMode::First => "first",
        }
    }

    pub fn from_name(name: &str) -> Option<ProofMode> {
        match name {
            "minimal" => Some(ProofMode::Minimal),
            "first" => Some(ProofMode::First),
            _ => None,
        }
    }
}

impl fmt::Display for ProofMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofError {
    /// The goal axiom has no derivation in the lifted graph.
    GoalNotDerivable(Axiom),
    /// A lifted vertex ended up without any derivation; this signals a bug
    /// in the role-hierarchy materialization.
    Underived(Axiom),
    Denormalize(DenormalizeError),
}

impl fmt::Display for ProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofError::GoalNotDerivable(ax) => write!(f, "goal not derivable: {ax}"),
            ProofError::Underived(ax) => write!(f, "no derivation recorded for {ax}"),
            ProofError::Denormalize(e) => write!(f, "{e}"),
        }
    }
}

impl From<DenormalizeError> for ProofError {
    fn from(e: DenormalizeError) -> Self {
        ProofError::Denormalize(e)
    }
}

/// Any failure of the end-to-end pipeline in [`build_proof`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildProofError {
    Saturation(SaturationError),
    Proof(ProofError),
}

impl fmt::Display for BuildProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildProofError::Saturation(e) => write!(f, "{e}"),
            BuildProofError::Proof(e) => write!(f, "{e}"),
        }
    }
}

impl From<SaturationError> for BuildProofError {
    fn from(e: SaturationError) -> Self {
        BuildProofError::Saturation(e)
    }
}

impl From<crate::ontology::NormalizeError> for BuildProofError {
    fn from(e: crate::ontology::NormalizeError) -> Self {
        BuildProofError::Saturation(SaturationError::Normalize(e))
    }
}

impl From<ProofError> for BuildProofError {
    fn from(e: ProofError) -> Self {
        BuildProofError::Proof(e)
    }
}

/// Full pipeline: normalize, saturate, lift and extract a proof of `goal`.
/// Accepts the same goals as `saturation::entails`: inclusions between
/// atomic concepts of the input signature and equivalences between names.
pub fn build_proof(
    tbox: &TBox,
    calculus: Calculus,
    goal: &Axiom,
    mode: ProofMode,
    params: &SaturationParams,
) -> Result<ProofDag, BuildProofError> {
    check_goal(tbox, goal)?;
    let ntbox = normalize(tbox, calculus)?;
    let mut params = params.clone();
    if calculus != Calculus::Elk || !goal_directed_applies(goal, &params.goal_directed) {
        params.goal_directed = None;
    }
    let graph: DerivationGraph = saturate_with(&ntbox, &params)?;
    let dl = lift_to_dl(&graph, &ntbox)?;
    let dag = match mode {
        ProofMode::Minimal => extract_min_proof(&dl, goal)?,
        ProofMode::First => extract_first_proof(&dl, goal)?,
    };
    Ok(dag)
}

fn goal_directed_applies(goal: &Axiom, directed: &Option<String>) -> bool {
    match (goal, directed) {
        (Axiom::ConceptInclusion(Concept::Named(l), _), Some(name)) => l == name,
        _ => false,
    }
}

fn check_goal(tbox: &TBox, goal: &Axiom) -> Result<(), SaturationError> {
    let names = tbox.concept_names();
    let check_atom = |c: &Concept| -> Result<(), SaturationError> {
        match c {
            Concept::Top | Concept::Bottom => Ok(()),
            Concept::Named(n) if names.contains(n) => Ok(()),
            Concept::Named(n) => Err(SaturationError::UnsupportedGoal(format!(
                "concept name {n} does not occur in the ontology"
            ))),
            other => Err(SaturationError::UnsupportedGoal(format!(
                "complex goal concept {other}"
            ))),
        }
    };
    match goal {
        Axiom::ConceptInclusion(l, r) => {
            check_atom(l)?;
            check_atom(r)
        }
        Axiom::Equivalence(a @ Concept::Named(_), b @ Concept::Named(_)) => {
            check_atom(a)?;
            check_atom(b)
        }
        other => Err(SaturationError::UnsupportedGoal(format!(
            "goal must be a concept inclusion or an equivalence between names, got {other}"
        ))),
    }
}

/// `lhs ⊑ rhs` holds in every interpretation, decided structurally (both
/// sides canonical): `C ⊑ ⊤`, `⊥ ⊑ C`, `C ⊑ C`, conjunction projections and
/// their closures under ∃.
pub(crate) fn trivially_entailed(lhs: &Concept, rhs: &Concept) -> bool {
    if *rhs == Concept::Top || *lhs == Concept::Bottom || lhs == rhs {
        return true;
    }
    if let Concept::Conjunction(ops) = rhs {
        return ops.iter().all(|op| trivially_entailed(lhs, op));
    }
    if let Concept::Conjunction(ops) = lhs {
        return ops.iter().any(|op| trivially_entailed(op, rhs));
    }
    if let (Concept::Existential(r, f), Concept::Existential(s, g)) = (lhs, rhs) {
        return r == s && trivially_entailed(f, g);
    }
    false
}

/// A tautology leaf: a trivially valid concept inclusion, a reflexive role
/// inclusion, or a reflexive equivalence.
pub(crate) fn tautology_axiom(ax: &Axiom) -> bool {
    match ax {
        Axiom::ConceptInclusion(l, r) => trivially_entailed(l, r),
        Axiom::RoleInclusion(r, s) => r == s,
        Axiom::Equivalence(a, b) => a == b,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_tbox;
    use alloc::string::ToString;
    use alloc::vec::Vec;

    const EXAMPLE: &str = "\
SubClassOf(A B)
SubClassOf(B ObjectSomeValuesFrom(r C))
SubClassOf(C D)
SubClassOf(ObjectSomeValuesFrom(t D) E)
SubObjectPropertyOf(r s)
SubObjectPropertyOf(s t)
";

    fn goal(l: &str, r: &str) -> Axiom {
        Axiom::sub(Concept::named(l), Concept::named(r))
    }

    fn minimal(text: &str, calculus: Calculus, g: &Axiom) -> ProofDag {
        let tbox = parse_tbox(text).unwrap();
        build_proof(&tbox, calculus, g, ProofMode::Minimal, &SaturationParams::default())
            .unwrap()
    }

    fn first(text: &str, calculus: Calculus, g: &Axiom) -> ProofDag {
        let tbox = parse_tbox(text).unwrap();
        build_proof(&tbox, calculus, g, ProofMode::First, &SaturationParams::default()).unwrap()
    }

    fn tree_depth(dag: &ProofDag, v: usize) -> u64 {
        dag.vertices[v]
            .children
            .iter()
            .map(|&c| 1 + tree_depth(dag, c))
            .max()
            .unwrap_or(0)
    }

    fn assert_valid(dag: &ProofDag, text: &str, g: &Axiom) {
        let tbox = parse_tbox(text).unwrap();
        let report = validate_proof(dag, &tbox, g);
        assert!(
            report.is_ok(),
            "{:?} proof of {g} has violations: {:?}",
            dag.calculus,
            report.violations
        );
    }

    #[test]
    fn example_minimal_sizes_and_depths() {
        let g = goal("A", "E");
        for (calc, size, depth) in [
            (Calculus::Elk, 10, 3),
            (Calculus::Textbook, 9, 2),
            (Calculus::Envelope, 10, 4),
        ] {
            let dag = minimal(EXAMPLE, calc, &g);
            assert_eq!(dag.tree_size(), size, "{calc} size");
            assert_eq!(tree_depth(&dag, dag.root), depth, "{calc} depth");
            // these proofs share nothing, so the DAG is already a tree
            assert_eq!(dag.vertex_count() as u128, size, "{calc} vertex count");
            assert_valid(&dag, EXAMPLE, &g);
        }
    }

    #[test]
    fn example_elk_minimal_structure() {
        let dag = minimal(EXAMPLE, Calculus::Elk, &goal("A", "E"));
        let labels: Vec<String> = dag.vertices.iter().map(|v| v.axiom.to_string()).collect();
        // six leaves: five TBox axioms plus the second role inclusion
        let leaves: Vec<&ProofVertex> =
            dag.vertices.iter().filter(|v| v.children.is_empty()).collect();
        assert_eq!(leaves.len(), 6);
        assert!(leaves.iter().all(|v| v.rule == "asserted"));
        assert!(labels.contains(&"SubObjectPropertyOf(r t)".to_string()));
        let rt = dag
            .vertices
            .iter()
            .find(|v| v.axiom.to_string() == "SubObjectPropertyOf(r t)")
            .unwrap();
        assert_eq!(rt.rule, "role_trans");
        // the derived r ⊑ t step cites s ⊑ t then the asserted r ⊑ s
        let child_labels: Vec<String> = rt
            .children
            .iter()
            .map(|&c| dag.vertices[c].axiom.to_string())
            .collect();
        assert_eq!(
            child_labels,
            ["SubObjectPropertyOf(s t)", "SubObjectPropertyOf(r s)"]
        );
        // lifted-away rules never appear
        for v in &dag.vertices {
            assert!(
                !matches!(v.rule.as_str(), "R0" | "R_top" | "R_reach" | "R_ex_minus" | "seed"),
                "unexpected rule {}",
                v.rule
            );
        }
    }

    #[test]
    fn asserted_axiom_proof_is_a_single_leaf() {
        for calc in Calculus::ALL {
            let dag = minimal(EXAMPLE, calc, &goal("A", "B"));
            assert_eq!(dag.vertex_count(), 1, "{calc}");
            assert_eq!(dag.vertices[0].rule, "asserted");
            assert_valid(&dag, EXAMPLE, &goal("A", "B"));
        }
    }

    #[test]
    fn first_mode_is_valid_and_no_smaller() {
        let g = goal("A", "E");
        for calc in Calculus::ALL {
            let min = minimal(EXAMPLE, calc, &g);
            let fst = first(EXAMPLE, calc, &g);
            assert_valid(&fst, EXAMPLE, &g);
            assert_eq!(fst.vertices[fst.root].axiom.canonicalize(), g.canonicalize());
            assert!(min.tree_size() <= fst.tree_size(), "{calc}");
        }
    }

    #[test]
    fn bottom_entailment_has_a_proof() {
        let text = "SubClassOf(A ObjectSomeValuesFrom(r B))\nSubClassOf(B owl:Nothing)\nSubClassOf(C C)";
        let g = goal("A", "C");
        for calc in Calculus::ALL {
            let dag = minimal(text, calc, &g);
            assert_valid(&dag, text, &g);
            // the ⊥ ⊑ C closing step rests on a tautology, not an assertion
            assert!(dag
                .vertices
                .iter()
                .any(|v| v.rule == "tautology"
                    && v.axiom.to_string() == "SubClassOf(owl:Nothing C)"));
        }
    }

    #[test]
    fn transitivity_proof_validates() {
        let text = "TransitiveObjectProperty(r)\n\
                    SubClassOf(A ObjectSomeValuesFrom(r B))\n\
                    SubClassOf(B ObjectSomeValuesFrom(r C))\n\
                    SubClassOf(ObjectSomeValuesFrom(r C) D)";
        let g = goal("A", "D");
        for calc in [Calculus::Elk, Calculus::Envelope] {
            let dag = minimal(text, calc, &g);
            assert_valid(&dag, text, &g);
            // the composition step cites the desugared chain axiom as a leaf
            assert!(dag.vertices.iter().any(|v| {
                v.rule == "asserted"
                    && v.axiom.to_string()
                        == "SubObjectPropertyOf(ObjectPropertyChain(r r) r)"
            }));
        }
    }

    #[test]
    fn long_chain_proof_validates() {
        let text = "SubObjectPropertyOf(ObjectPropertyChain(r s t) u)\n\
                    SubClassOf(A ObjectSomeValuesFrom(r B))\n\
                    SubClassOf(B ObjectSomeValuesFrom(s C))\n\
                    SubClassOf(C ObjectSomeValuesFrom(t D))\n\
                    SubClassOf(ObjectSomeValuesFrom(u D) E)";
        let g = goal("A", "E");
        for calc in [Calculus::Elk, Calculus::Envelope] {
            let dag = minimal(text, calc, &g);
            assert_valid(&dag, text, &g);
            // the fresh chain role denormalizes to a nested existential
            assert!(dag.vertices.iter().any(|v| {
                v.axiom.to_string()
                    == "SubClassOf(A ObjectSomeValuesFrom(r ObjectSomeValuesFrom(s C)))"
            }));
        }
    }

    #[test]
    fn equivalence_goal_gets_a_pairing_root() {
        let text = "SubClassOf(A B)\nSubClassOf(B A)";
        let g = Axiom::Equivalence(Concept::named("A"), Concept::named("B"));
        for calc in Calculus::ALL {
            let dag = minimal(text, calc, &g);
            assert_eq!(dag.vertices[dag.root].rule, "equiv");
            assert_eq!(dag.vertices[dag.root].children.len(), 2);
            assert_valid(&dag, text, &g);
        }
    }

    #[test]
    fn trivial_goal_is_a_tautology_vertex() {
        let dag = minimal("SubClassOf(A B)", Calculus::Elk, &Axiom::sub(Concept::named("A"), Concept::Top));
        assert_eq!(dag.vertex_count(), 1);
        assert_eq!(dag.vertices[0].rule, "tautology");
        assert_valid(&dag, "SubClassOf(A B)", &Axiom::sub(Concept::named("A"), Concept::Top));
    }

    #[test]
    fn underivable_goal_errors() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let err = build_proof(
            &tbox,
            Calculus::Elk,
            &goal("E", "A"),
            ProofMode::Minimal,
            &SaturationParams::default(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            BuildProofError::Proof(ProofError::GoalNotDerivable(_))
        ));
    }

    #[test]
    fn unsupported_goal_is_rejected_before_saturation() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let err = build_proof(
            &tbox,
            Calculus::Elk,
            &Axiom::sub(Concept::named("A"), Concept::some("r", Concept::named("C"))),
            ProofMode::Minimal,
            &SaturationParams::default(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            BuildProofError::Saturation(SaturationError::UnsupportedGoal(_))
        ));
    }

    #[test]
    fn unravel_materializes_small_trees() {
        let g = goal("A", "E");
        let dag = minimal(EXAMPLE, Calculus::Elk, &g);
        let tree = unravel(&dag, 1000);
        let root = tree.root.as_ref().expect("materialized");
        assert_eq!(root.size(), dag.tree_size());
        let tight = unravel(&dag, 3);
        assert!(!tight.is_materialized());
    }

    #[test]
    fn validate_flags_foreign_leaves_and_duplicates() {
        let g = goal("A", "E");
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let dag = minimal(EXAMPLE, Calculus::Elk, &g);

        let mut foreign = dag.clone();
        for v in &mut foreign.vertices {
            if v.children.is_empty() {
                v.axiom = goal("A", "Z");
                break;
            }
        }
        let report = validate_proof(&foreign, &tbox, &g);
        assert!(report
            .violations
            .iter()
            .any(|v| v.message.contains("foreign leaf")));

        let mut duped = dag.clone();
        let root_ax = duped.vertices[duped.root].axiom.clone();
        for v in &mut duped.vertices {
            if v.children.is_empty() {
                v.axiom = root_ax;
                break;
            }
        }
        let report = validate_proof(&duped, &tbox, &g);
        assert!(report
            .violations
            .iter()
            .any(|v| v.message.contains("duplicate label")));
    }

    #[test]
    fn validate_flags_unsound_steps() {
        let g = goal("A", "E");
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let mut dag = minimal(EXAMPLE, Calculus::Elk, &g);
        // cut a premise from the root step
        dag.vertices[dag.root].children.truncate(1);
        let report = validate_proof(&dag, &tbox, &g);
        assert!(
            report
                .violations
                .iter()
                .any(|v| v.message.contains("unsound step") || v.message.contains("unreachable")),
            "{:?}",
            report.violations
        );
    }

    #[test]
    fn conjunction_proof_validates() {
        let text = "SubClassOf(A ObjectIntersectionOf(B C))\n\
                    SubClassOf(ObjectIntersectionOf(C B) D)";
        let g = goal("A", "D");
        for calc in Calculus::ALL {
            let dag = minimal(text, calc, &g);
            assert_valid(&dag, text, &g);
        }
    }

    #[test]
    fn nested_existential_proof_validates() {
        let text = "SubClassOf(A ObjectSomeValuesFrom(r ObjectSomeValuesFrom(s B)))\n\
                    SubClassOf(ObjectSomeValuesFrom(r ObjectSomeValuesFrom(s B)) C)";
        let g = goal("A", "C");
        for calc in Calculus::ALL {
            let dag = minimal(text, calc, &g);
            assert_valid(&dag, text, &g);
            let fst = first(text, calc, &g);
            assert_valid(&fst, text, &g);
        }
    }

    #[test]
    fn chain_tbox_depths_follow_the_tie_break() {
        // A0 ⊑ A1 ⊑ … ⊑ An with goal A0 ⊑ An: every textbook proof has
        // size 2n−1, so the depth tie-break selects a balanced CR3 tree
        for n in [8usize, 16] {
            let mut text = String::new();
            for i in 0..n {
                text.push_str(&format!("SubClassOf(A{} A{})\n", i, i + 1));
            }
            let g = goal("A0", &format!("A{n}"));
            let elk = minimal(&text, Calculus::Elk, &g);
            assert_valid(&elk, &text, &g);
            assert_eq!(tree_depth(&elk, elk.root), (n - 1) as u64, "elk n={n}");
            let tb = minimal(&text, Calculus::Textbook, &g);
            assert_valid(&tb, &text, &g);
            assert_eq!(tb.tree_size(), (2 * n - 1) as u128, "textbook n={n}");
            assert_eq!(
                tree_depth(&tb, tb.root),
                (usize::BITS - (n - 1).leading_zeros()) as u64,
                "textbook n={n}"
            );
        }
    }
}
