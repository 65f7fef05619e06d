//! Lifting a saturation-level derivation graph to DL-level axioms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{tautology_axiom, ProofError};
use crate::ontology::{Axiom, Calculus, Concept, Denormalized, NormalizedTBox};
use crate::saturation::{DerivationGraph, Fact};

/// Index of an axiom in its [`DlGraph`].
pub type DlId = usize;

/// One DL-level inference: a rule tag and ordered premise axioms. Zero
/// premises mean a leaf inference (`"asserted"` or `"tautology"`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DlDerivation {
    pub rule: &'static str,
    pub premises: Vec<DlId>,
}

/// The DL-level derivation graph: one vertex per distinct denormalized
/// axiom, with every alternative derivation kept in recording order (leaf
/// derivations sorted first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlGraph {
    pub calculus: Calculus,
    axioms: Vec<Axiom>,
    index: BTreeMap<Axiom, DlId>,
    derivations: Vec<Vec<DlDerivation>>,
}

impl DlGraph {
    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn axiom(&self, id: DlId) -> &Axiom {
        &self.axioms[id]
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn id_of(&self, ax: &Axiom) -> Option<DlId> {
        self.index.get(&ax.canonicalize()).copied()
    }

    pub fn derivations(&self, id: DlId) -> &[DlDerivation] {
        &self.derivations[id]
    }
}

/// How a saturation fact appears at the DL level.
#[derive(Clone)]
enum Mapped {
    /// Proper DL axiom.
    Vertex(DlId),
    /// Alias-definition triviality; spliced out of premise lists.
    Marker,
    /// `init` facts; dropped together with their premise positions.
    Dropped,
}

/// Is side-condition slot `idx` of `rule` an `r ⊑* s` pair (as opposed to a
/// `… ∈ T` membership)?
fn is_star_side(rule: &str, idx: usize) -> bool {
    matches!(
        (rule, idx),
        ("R_ex_plus", 0) | ("CR5p", 0) | ("R_circ", 0) | ("R_circ", 1)
    )
}

struct Lifter<'a> {
    nt: &'a NormalizedTBox,
    graph: DlGraph,
    /// Simple role inclusions of the normalized TBox, by sub-role.
    role_axioms: BTreeMap<String, Vec<String>>,
    /// Role pairs whose derivations have been materialized.
    materialized: BTreeSet<(String, String)>,
}

impl<'a> Lifter<'a> {
    fn ensure_vertex(&mut self, ax: Axiom) -> DlId {
        let ax = ax.canonicalize();
        if let Some(&id) = self.graph.index.get(&ax) {
            return id;
        }
        let id = self.graph.axioms.len();
        self.graph.index.insert(ax.clone(), id);
        self.graph.axioms.push(ax);
        self.graph.derivations.push(Vec::new());
        id
    }

    fn add_derivation(&mut self, id: DlId, d: DlDerivation) {
        if !self.graph.derivations[id].contains(&d) {
            self.graph.derivations[id].push(d);
        }
    }

    /// Vertex plus its leaf derivation: `"tautology"` for trivially valid
    /// axioms, `"asserted"` otherwise.
    fn ensure_leaf(&mut self, ax: Axiom) -> DlId {
        let id = self.ensure_vertex(ax);
        let rule = if tautology_axiom(&self.graph.axioms[id]) {
            "tautology"
        } else {
            "asserted"
        };
        self.add_derivation(id, DlDerivation { rule, premises: vec![] });
        id
    }

    /// Vertex for `r ⊑ s` (input roles) with its derivations: reflexivity,
    /// direct assertion, and every role-transitivity decomposition
    /// `[m ⊑ s; r ⊑ m ∈ T] ⟹ r ⊑ s`.
    fn ensure_role_pair(&mut self, r: String, s: String) -> DlId {
        let root = self.ensure_vertex(Axiom::RoleInclusion(r.clone(), s.clone()));
        let mut stack = vec![(r, s)];
        while let Some((r, s)) = stack.pop() {
            if !self.materialized.insert((r.clone(), s.clone())) {
                continue;
            }
            let id = self.ensure_vertex(Axiom::RoleInclusion(r.clone(), s.clone()));
            if r == s {
                self.add_derivation(id, DlDerivation { rule: "tautology", premises: vec![] });
                continue;
            }
            let mids = self.role_axioms.get(&r).cloned().unwrap_or_default();
            for m in mids {
                if m == s {
                    self.add_derivation(id, DlDerivation { rule: "asserted", premises: vec![] });
                    continue;
                }
                if !self.nt.role_hierarchy().contains(&(m.clone(), s.clone())) {
                    continue;
                }
                let mid = self.ensure_vertex(Axiom::RoleInclusion(m.clone(), s.clone()));
                stack.push((m.clone(), s.clone()));
                let side = self.ensure_leaf(Axiom::RoleInclusion(r.clone(), m));
                self.add_derivation(
                    id,
                    DlDerivation { rule: "role_trans", premises: vec![mid, side] },
                );
            }
        }
        root
    }

    /// The DL axiom a fact denotes, before denormalization.
    fn fact_axiom(fact: &Fact) -> Option<Axiom> {
        match fact {
            Fact::SubClass(l, r) | Fact::SubClassComplex(l, r) => {
                Some(Axiom::ConceptInclusion(l.clone(), r.clone()))
            }
            Fact::Link(src, role, dst) => Some(Axiom::ConceptInclusion(
                src.clone(),
                Concept::some(role, dst.clone()),
            )),
            Fact::Init(_) => None,
        }
    }

    fn map_fact(&mut self, fact: &Fact) -> Result<Mapped, ProofError> {
        let Some(ax) = Self::fact_axiom(fact) else {
            return Ok(Mapped::Dropped);
        };
        match self.nt.denormalize_axiom(&ax)? {
            Denormalized::Tautology => Ok(Mapped::Marker),
            Denormalized::Axiom(dl_ax) => Ok(Mapped::Vertex(self.ensure_vertex(dl_ax))),
        }
    }

    fn map_side(&mut self, rule: &'static str, idx: usize, side: &Axiom) -> Result<Option<DlId>, ProofError> {
        match self.nt.denormalize_axiom(side)? {
            Denormalized::Tautology => Ok(None),
            Denormalized::Axiom(ax) => {
                if is_star_side(rule, idx) {
                    if let Axiom::RoleInclusion(r, s) = ax {
                        return Ok(Some(self.ensure_role_pair(r, s)));
                    }
                }
                Ok(Some(self.ensure_leaf(ax)))
            }
        }
    }
}

/// Lifts every fact and rule application of `graph` to DL level. All
/// alternative derivations per axiom are kept; leaf derivations are moved to
/// the front of each list.
pub fn lift_to_dl(graph: &DerivationGraph, nt: &NormalizedTBox) -> Result<DlGraph, ProofError> {
    let mut role_axioms: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for ax in nt.norm_axioms() {
        if let Axiom::RoleInclusion(r, s) = ax {
            role_axioms.entry(r.clone()).or_default().push(s.clone());
        }
    }
    for sups in role_axioms.values_mut() {
        sups.sort();
        sups.dedup();
    }

    let mut lifter = Lifter {
        nt,
        graph: DlGraph {
            calculus: nt.calculus,
            axioms: Vec::new(),
            index: BTreeMap::new(),
            derivations: Vec::new(),
        },
        role_axioms,
        materialized: BTreeSet::new(),
    };

    let mut fact_map: Vec<Mapped> = Vec::with_capacity(graph.len());
    for fact in graph.facts() {
        let mapped = lifter.map_fact(fact)?;
        fact_map.push(mapped);
    }

    for id in 0..graph.len() {
        let Mapped::Vertex(concl) = fact_map[id] else {
            continue;
        };
        for d in graph.derivations(id) {
            let mut premises: Vec<DlId> = Vec::new();
            for &p in &d.premises {
                if let Mapped::Vertex(pid) = fact_map[p] {
                    premises.push(pid);
                }
            }
            for (idx, side) in d.side_axioms.iter().enumerate() {
                if let Some(pid) = lifter.map_side(d.rule, idx, side)? {
                    premises.push(pid);
                }
            }
            // the same DL axiom can appear in two premise positions; keep
            // the first occurrence
            let mut seen = BTreeSet::new();
            premises.retain(|p| seen.insert(*p));
            if premises.contains(&concl) {
                // identity step (e.g. R∃⁻ after Link replacement): collapsed
                continue;
            }
            let rule = if premises.is_empty() {
                if tautology_axiom(lifter.graph.axiom(concl)) {
                    "tautology"
                } else {
                    "asserted"
                }
            } else {
                d.rule
            };
            lifter.add_derivation(concl, DlDerivation { rule, premises });
        }
    }

    // leaf derivations first, so first-trace extraction prefers assertions
    for list in &mut lifter.graph.derivations {
        list.sort_by_key(|d| !d.premises.is_empty());
    }

    for (id, list) in lifter.graph.derivations.iter().enumerate() {
        if list.is_empty() {
            return Err(ProofError::Underived(lifter.graph.axioms[id].clone()));
        }
    }

    Ok(lifter.graph)
}
