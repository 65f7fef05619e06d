//! Choosing one derivation per axiom and emitting the reachable proof.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::lift::{DlDerivation, DlGraph, DlId};
use super::{trivially_entailed, ProofError};
use crate::ontology::{Axiom, Calculus, Concept};

/// One proof vertex: a DL axiom, the rule that derived it, and its ordered
/// premises. Leaves (`children` empty) carry rule `"asserted"` or
/// `"tautology"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofVertex {
    pub axiom: Axiom,
    pub rule: String,
    pub children: Vec<usize>,
}

/// A non-redundant proof: one vertex per distinct axiom, each derived by at
/// most one step, acyclic, with the goal at `root`. Vertex ids are dense and
/// assigned in preorder from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDag {
    pub calculus: Calculus,
    pub goal: Axiom,
    pub root: usize,
    pub vertices: Vec<ProofVertex>,
}

impl ProofDag {
    /// Number of distinct vertices (not the unraveled tree size).
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Unraveled tree size per vertex, by the compositional recurrence
    /// `size(v) = 1 + Σ size(children)` (saturating).
    pub fn tree_sizes(&self) -> Vec<u128> {
        fn go(dag: &ProofDag, v: usize, sizes: &mut [Option<u128>]) -> u128 {
            if let Some(s) = sizes[v] {
                return s;
            }
            let mut s: u128 = 1;
            for &c in &dag.vertices[v].children {
                s = s.saturating_add(go(dag, c, sizes));
            }
            sizes[v] = Some(s);
            s
        }
        let mut sizes = vec![None; self.vertices.len()];
        for v in 0..self.vertices.len() {
            go(self, v, &mut sizes);
        }
        sizes.into_iter().map(|s| s.unwrap_or(1)).collect()
    }

    /// Unraveled tree size of the whole proof.
    pub fn tree_size(&self) -> u128 {
        self.tree_sizes()[self.root]
    }
}

/// A tree unraveling of a [`ProofDag`]: materialized below the node cap,
/// implicit (metrics use the DAG recurrences) above it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub dag: ProofDag,
    /// `None` means the tree was too large to materialize.
    pub root: Option<TreeNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    /// Index into `dag.vertices`.
    pub vertex: usize,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn size(&self) -> u128 {
        let mut s: u128 = 1;
        for c in &self.children {
            s = s.saturating_add(c.size());
        }
        s
    }
}

impl ProofTree {
    pub fn is_materialized(&self) -> bool {
        self.root.is_some()
    }
}

/// Unravels a proof into a tree, duplicating shared subproofs. If the tree
/// would exceed `cap` nodes it stays implicit.
pub fn unravel(dag: &ProofDag, cap: u128) -> ProofTree {
    let sizes = dag.tree_sizes();
    let root = if sizes[dag.root] <= cap {
        Some(materialize(dag, dag.root))
    } else {
        None
    };
    ProofTree { dag: dag.clone(), root }
}

fn materialize(dag: &ProofDag, v: usize) -> TreeNode {
    TreeNode {
        vertex: v,
        children: dag.vertices[v]
            .children
            .iter()
            .map(|&c| materialize(dag, c))
            .collect(),
    }
}

/// Extracts the proof of `goal` that minimizes unraveled tree size over the
/// recorded derivations; ties are broken by smaller unraveled depth, then by
/// lexicographic comparison of the serialized premise labels.
pub fn extract_min_proof(dl: &DlGraph, goal: &Axiom) -> Result<ProofDag, ProofError> {
    extract(dl, goal, false)
}

/// Extracts a proof of `goal` using only the first recorded derivation per
/// axiom (derived role-inclusion premises, which are materialized rather
/// than traced, still resolve minimally).
pub fn extract_first_proof(dl: &DlGraph, goal: &Axiom) -> Result<ProofDag, ProofError> {
    extract(dl, goal, true)
}

enum Target {
    Vertex(DlId),
    /// The goal is valid without premises (e.g. `A ⊑ ⊤`); emitted as a
    /// single tautology vertex.
    Trivial(Axiom),
}

fn resolve_inclusion(dl: &DlGraph, lhs: &Concept, rhs: &Concept) -> Result<Target, ProofError> {
    let ax = Axiom::ConceptInclusion(lhs.clone(), rhs.clone()).canonicalize();
    if let Some(id) = dl.id_of(&ax) {
        return Ok(Target::Vertex(id));
    }
    if let Axiom::ConceptInclusion(l, r) = &ax {
        if trivially_entailed(l, r) {
            return Ok(Target::Trivial(ax));
        }
    }
    Err(ProofError::GoalNotDerivable(ax))
}

fn extract(dl: &DlGraph, goal: &Axiom, first_only: bool) -> Result<ProofDag, ProofError> {
    let goal = goal.canonicalize();
    let directions: Vec<Target> = match &goal {
        Axiom::ConceptInclusion(l, r) => vec![resolve_inclusion(dl, l, r)?],
        Axiom::Equivalence(a, b) => vec![
            resolve_inclusion(dl, a, b)?,
            resolve_inclusion(dl, b, a)?,
        ],
        other => return Err(ProofError::GoalNotDerivable(other.clone())),
    };

    let best = settle(dl, first_only);

    let mut builder = Builder {
        dl,
        best: &best,
        vertices: Vec::new(),
        memo: BTreeMap::new(),
        by_label: BTreeMap::new(),
    };

    let root = if let Axiom::Equivalence(_, _) = &goal {
        let root = builder.push(goal.clone(), "equiv");
        let mut children = Vec::new();
        for t in &directions {
            let child = builder.emit_target(t)?;
            if !children.contains(&child) {
                children.push(child);
            }
        }
        builder.vertices[root].children = children;
        root
    } else {
        builder.emit_target(&directions[0])?
    };

    Ok(ProofDag {
        calculus: dl.calculus,
        goal,
        root,
        vertices: builder.vertices,
    })
}

type Best = (u128, u64, usize);

fn allowed(dl: &DlGraph, v: DlId, first_only: bool) -> &[DlDerivation] {
    let ds = dl.derivations(v);
    if first_only && !matches!(dl.axiom(v), Axiom::RoleInclusion(_, _)) && !ds.is_empty() {
        &ds[..1]
    } else {
        ds
    }
}

/// Fixpoint over the derivation hypergraph: per vertex the best
/// `(tree size, tree depth, derivation)` choice, with `cost(v) = 1 + Σ
/// cost(premises)` and label-lexicographic final tie-break.
fn settle(dl: &DlGraph, first_only: bool) -> Vec<Option<Best>> {
    let n = dl.len();
    let mut best: Vec<Option<Best>> = vec![None; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            for (di, d) in allowed(dl, v, first_only).iter().enumerate() {
                let mut cost: u128 = 1;
                let mut depth: u64 = 0;
                let mut ready = true;
                for &p in &d.premises {
                    match best[p] {
                        Some((c, dep, _)) => {
                            cost = cost.saturating_add(c);
                            depth = depth.max(dep + 1);
                        }
                        None => {
                            ready = false;
                            break;
                        }
                    }
                }
                if !ready {
                    continue;
                }
                let better = match best[v] {
                    None => true,
                    Some((bc, bd, bi)) => {
                        if (cost, depth) != (bc, bd) {
                            (cost, depth) < (bc, bd)
                        } else if bi == di {
                            false
                        } else {
                            premise_labels(dl, d) < premise_labels(dl, &dl.derivations(v)[bi])
                        }
                    }
                };
                if better {
                    best[v] = Some((cost, depth, di));
                    changed = true;
                }
            }
        }
        if !changed {
            return best;
        }
    }
}

fn premise_labels(dl: &DlGraph, d: &DlDerivation) -> Vec<String> {
    d.premises.iter().map(|&p| dl.axiom(p).to_string()).collect()
}

struct Builder<'a> {
    dl: &'a DlGraph,
    best: &'a [Option<Best>],
    vertices: Vec<ProofVertex>,
    memo: BTreeMap<DlId, usize>,
    by_label: BTreeMap<Axiom, usize>,
}

impl<'a> Builder<'a> {
    fn push(&mut self, axiom: Axiom, rule: &str) -> usize {
        let id = self.vertices.len();
        self.by_label.insert(axiom.clone(), id);
        self.vertices.push(ProofVertex {
            axiom,
            rule: rule.to_string(),
            children: Vec::new(),
        });
        id
    }

    fn emit_target(&mut self, t: &Target) -> Result<usize, ProofError> {
        match t {
            Target::Vertex(v) => self.emit(*v),
            Target::Trivial(ax) => {
                if let Some(&id) = self.by_label.get(ax) {
                    return Ok(id);
                }
                Ok(self.push(ax.clone(), "tautology"))
            }
        }
    }

    fn emit(&mut self, v: DlId) -> Result<usize, ProofError> {
        if let Some(&id) = self.memo.get(&v) {
            return Ok(id);
        }
        let Some((_, _, di)) = self.best[v] else {
            return Err(ProofError::GoalNotDerivable(self.dl.axiom(v).clone()));
        };
        let d = self.dl.derivations(v)[di].clone();
        let axiom = self.dl.axiom(v).clone();
        let id = self.push(axiom, d.rule);
        self.memo.insert(v, id);
        let mut children = Vec::with_capacity(d.premises.len());
        for &p in &d.premises {
            children.push(self.emit(p)?);
        }
        self.vertices[id].children = children;
        Ok(id)
    }
}
