//! Re-checking finished proofs against the input TBox.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::extract::ProofDag;
use super::tautology_axiom;
use crate::ontology::{Axiom, Calculus, Concept, TBox};
use crate::saturation::entails;

/// One failed check; `vertex` is the offending vertex when the violation is
/// local.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub vertex: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn add(&mut self, vertex: Option<usize>, message: String) {
        self.violations.push(Violation { vertex, message });
    }
}

/// DL-level rule tags each calculus may use for internal steps, plus the
/// synthetic `equiv` pairing and the two added role rules.
fn allowed_rules(calculus: Calculus) -> &'static [&'static str] {
    match calculus {
        Calculus::Elk => &[
            "R_sub", "R_and_minus", "R_and_plus", "R_ex_plus", "R_bot", "R_circ", "role_trans",
            "equiv",
        ],
        Calculus::Textbook => &["CR3", "CR4", "CR5p", "R_bot_p", "role_trans", "equiv"],
        Calculus::Envelope => &[
            "CR1", "CR2", "CR3", "CR4", "CR5", "CR10", "CR11", "role_trans", "equiv",
        ],
    }
}

/// The input axioms in the forms proofs may cite: as written, plus the
/// desugared forms of transitivity, domain and equivalence axioms, plus
/// right-conjunction splits (`A ⊑ B⊓C` may be cited as `A ⊑ B`).
fn asserted_forms(tbox: &TBox) -> BTreeSet<Axiom> {
    let mut set = BTreeSet::new();
    let add_inclusion = |set: &mut BTreeSet<Axiom>, l: &Concept, r: &Concept| {
        let ax = Axiom::ConceptInclusion(l.clone(), r.clone()).canonicalize();
        if let Axiom::ConceptInclusion(cl, Concept::Conjunction(ops)) = &ax {
            for op in ops {
                set.insert(Axiom::ConceptInclusion(cl.clone(), op.clone()));
            }
        }
        set.insert(ax);
    };
    for ax in tbox.axioms() {
        match ax {
            Axiom::ConceptInclusion(l, r) => add_inclusion(&mut set, l, r),
            Axiom::Transitivity(r) => {
                set.insert(ax.canonicalize());
                set.insert(Axiom::RoleChainInclusion(vec![r.clone(), r.clone()], r.clone()));
            }
            Axiom::Domain(r, c) => {
                set.insert(ax.canonicalize());
                add_inclusion(&mut set, &Concept::some(r, Concept::Top), c);
            }
            Axiom::Equivalence(a, b) => {
                set.insert(ax.canonicalize());
                add_inclusion(&mut set, a, b);
                add_inclusion(&mut set, b, a);
            }
            _ => {
                set.insert(ax.canonicalize());
            }
        }
    }
    set
}

/// Do the children's labels entail the conclusion? Checked semantically by
/// running the elk calculus on the children plus a fresh-name encoding of
/// the conclusion's (possibly complex) sides.
fn step_sound(children: &[Axiom], conclusion: &Axiom) -> bool {
    match conclusion {
        Axiom::ConceptInclusion(l, r) => entails_inclusion(children, l, r),
        Axiom::Equivalence(a, b) => {
            entails_inclusion(children, a, b) && entails_inclusion(children, b, a)
        }
        Axiom::RoleInclusion(r, t) => entails_role_chain(children, &[r.clone()], t),
        Axiom::RoleChainInclusion(seq, t) => entails_role_chain(children, seq, t),
        _ => false,
    }
}

fn entails_inclusion(children: &[Axiom], lhs: &Concept, rhs: &Concept) -> bool {
    let mut tbox = TBox::new(children.to_vec());
    tbox.insert(Axiom::Equivalence(Concept::named("_StepL"), lhs.clone()));
    tbox.insert(Axiom::Equivalence(Concept::named("_StepR"), rhs.clone()));
    let goal = Axiom::sub(Concept::named("_StepL"), Concept::named("_StepR"));
    entails(&tbox, Calculus::Elk, &goal).map(|c| c.holds).unwrap_or(false)
}

fn entails_role_chain(children: &[Axiom], seq: &[String], sup: &str) -> bool {
    // r₁⋯rₙ ⊑ t iff _L ⊑ ∃r₁.…∃rₙ._M and ∃t._M ⊑ _R force _L ⊑ _R
    let mut nested = Concept::named("_StepM");
    for r in seq.iter().rev() {
        nested = Concept::some(r, nested);
    }
    let mut tbox = TBox::new(children.to_vec());
    tbox.insert(Axiom::sub(Concept::named("_StepL"), nested));
    tbox.insert(Axiom::sub(
        Concept::some(sup, Concept::named("_StepM")),
        Concept::named("_StepR"),
    ));
    let goal = Axiom::sub(Concept::named("_StepL"), Concept::named("_StepR"));
    entails(&tbox, Calculus::Elk, &goal).map(|c| c.holds).unwrap_or(false)
}

/// Checks all ProofDag invariants: root label, leaf provenance, acyclicity,
/// label uniqueness, reachability and per-step soundness. Violations are
/// collected, not raised.
pub fn validate_proof(dag: &ProofDag, tbox: &TBox, goal: &Axiom) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = dag.vertices.len();

    if n == 0 {
        report.add(None, "proof has no vertices".to_string());
        return report;
    }
    if dag.root >= n {
        report.add(None, format!("root id {} out of range", dag.root));
        return report;
    }

    let mut malformed = false;
    for (v, vx) in dag.vertices.iter().enumerate() {
        for &c in &vx.children {
            if c >= n {
                report.add(Some(v), format!("child id {c} out of range"));
                malformed = true;
            }
        }
    }
    if malformed {
        return report;
    }

    // root label
    if dag.vertices[dag.root].axiom.canonicalize() != goal.canonicalize() {
        report.add(
            Some(dag.root),
            format!(
                "root label {} does not match the goal {}",
                dag.vertices[dag.root].axiom, goal
            ),
        );
    }

    // label uniqueness
    let mut seen: BTreeSet<Axiom> = BTreeSet::new();
    for (v, vx) in dag.vertices.iter().enumerate() {
        if !seen.insert(vx.axiom.canonicalize()) {
            report.add(Some(v), format!("duplicate label {}", vx.axiom));
        }
    }

    // acyclicity (colors: 0 white, 1 on stack, 2 done)
    let mut color = vec![0u8; n];
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        // iterative DFS; (vertex, next-child index)
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = 1;
        while let Some(&(v, i)) = stack.last() {
            if i < dag.vertices[v].children.len() {
                stack.last_mut().expect("nonempty").1 += 1;
                let c = dag.vertices[v].children[i];
                match color[c] {
                    0 => {
                        color[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => {
                        report.add(Some(c), format!("cycle through {}", dag.vertices[c].axiom));
                        color[c] = 2;
                    }
                    _ => {}
                }
            } else {
                color[v] = 2;
                stack.pop();
            }
        }
    }
    if !report.is_ok() {
        // cycles make the remaining structural checks unreliable
        return report;
    }

    // reachability from the root
    let mut reachable = vec![false; n];
    let mut stack = vec![dag.root];
    while let Some(v) = stack.pop() {
        if reachable[v] {
            continue;
        }
        reachable[v] = true;
        stack.extend(dag.vertices[v].children.iter().copied());
    }
    for (v, r) in reachable.iter().enumerate() {
        if !r {
            report.add(Some(v), format!("unreachable vertex {}", dag.vertices[v].axiom));
        }
    }

    // leaves and steps
    let asserted = asserted_forms(tbox);
    let rules = allowed_rules(dag.calculus);
    for (v, vx) in dag.vertices.iter().enumerate() {
        if vx.children.is_empty() {
            match vx.rule.as_str() {
                "asserted" => {
                    if !asserted.contains(&vx.axiom.canonicalize()) {
                        report.add(Some(v), format!("foreign leaf {} not in the TBox", vx.axiom));
                    }
                }
                "tautology" => {
                    if !tautology_axiom(&vx.axiom.canonicalize()) {
                        report.add(Some(v), format!("leaf {} is not a tautology", vx.axiom));
                    }
                }
                other => {
                    report.add(Some(v), format!("leaf with non-leaf rule {other}"));
                }
            }
            continue;
        }
        if !rules.contains(&vx.rule.as_str()) {
            report.add(
                Some(v),
                format!("rule {} is not a {} rule", vx.rule, dag.calculus),
            );
            continue;
        }
        let children: Vec<Axiom> = vx
            .children
            .iter()
            .map(|&c| dag.vertices[c].axiom.clone())
            .collect();
        if !step_sound(&children, &vx.axiom) {
            report.add(
                Some(v),
                format!("unsound step: premises do not entail {}", vx.axiom),
            );
        }
    }

    report
}
