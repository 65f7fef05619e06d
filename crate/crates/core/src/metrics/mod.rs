//! Proof shape measures: size, depth, justification size, bushiness,
//! directed cutwidth and average step complexity.
//!
//! All measures are defined on the tree unraveling of a proof. They are
//! computed by compositional recurrences memoized on the DAG vertices, so
//! implicit (unmaterialized) trees are handled without expanding them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::ontology::{Axiom, Concept};
use crate::proofs::{ProofDag, ProofTree, TreeNode};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_u128(n: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Weights of the step-complexity score; see [`step_complexity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepWeights {
    pub premises: BigRational,
    pub axiom_shapes: BigRational,
    pub constructors: BigRational,
    pub depth: BigRational,
    pub triviality: BigRational,
}

impl Default for StepWeights {
    fn default() -> Self {
        StepWeights {
            premises: rat(10),
            axiom_shapes: rat(10),
            constructors: rat(5),
            depth: rat(2),
            triviality: rat(50),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricsError {
    /// Brute-force cutwidth is limited to 12 tree vertices.
    TooLarge(u128),
    /// Brute-force cutwidth needs a materialized tree.
    ImplicitTree,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::TooLarge(n) => {
                write!(f, "tree with {n} vertices exceeds the brute-force limit of 12")
            }
            MetricsError::ImplicitTree => write!(f, "tree too large to materialize"),
        }
    }
}

/// A topological linear order of the tree vertices: `order[k]` is the vertex
/// at position `k`, `positions[v]` its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Serialization {
    pub order: Vec<usize>,
    pub positions: Vec<usize>,
}

/// The basic counting measures of a proof tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicMeasures {
    /// Node count of the unraveled tree (saturating).
    pub size: u128,
    /// Longest leaf-to-root path, in edges.
    pub depth: u64,
    /// Number of distinct TBox leaves (tautology leaves excluded).
    pub justification_size: usize,
    /// `size / (depth + 1)`, exact.
    pub bushiness: BigRational,
}

/// All seven report fields of a proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsReport {
    pub size: u128,
    pub depth: u64,
    pub justification_size: usize,
    pub bushiness: BigRational,
    pub cutwidth: u64,
    pub avg_step_complexity: BigRational,
    /// Number of internal nodes of the unraveled tree (saturating).
    pub step_count: u128,
}

/// Memoized per-DAG-vertex values for all tree recurrences.
struct Memo<'a> {
    dag: &'a ProofDag,
    size: Vec<Option<u128>>,
    depth: Vec<Option<u64>>,
    dcw: Vec<Option<u64>>,
}

impl<'a> Memo<'a> {
    fn new(dag: &'a ProofDag) -> Self {
        let n = dag.vertices.len();
        Memo { dag, size: vec![None; n], depth: vec![None; n], dcw: vec![None; n] }
    }

    fn size(&mut self, v: usize) -> u128 {
        if let Some(s) = self.size[v] {
            return s;
        }
        let mut s: u128 = 1;
        for &c in &self.dag.vertices[v].children.clone() {
            s = s.saturating_add(self.size(c));
        }
        self.size[v] = Some(s);
        s
    }

    fn depth(&mut self, v: usize) -> u64 {
        if let Some(d) = self.depth[v] {
            return d;
        }
        let mut d = 0;
        for &c in &self.dag.vertices[v].children.clone() {
            d = d.max(1 + self.depth(c));
        }
        self.depth[v] = Some(d);
        d
    }

    /// Directed cutwidth of the subtree below `v`, by the standard
    /// serialization recurrence: a singleton is 0; otherwise with the ℓ
    /// children ordered by non-decreasing cutwidth,
    /// `dcw = max({ℓ} ∪ {dcw(Cᵢ) + ℓ − i})`.
    fn dcw(&mut self, v: usize) -> u64 {
        if let Some(d) = self.dcw[v] {
            return d;
        }
        let children = self.sorted_children(v);
        let l = children.len() as u64;
        let mut value = l;
        for (i, &c) in children.iter().enumerate() {
            value = value.max(self.dcw(c) + l - (i as u64 + 1));
        }
        self.dcw[v] = Some(value);
        value
    }

    /// Children ordered by non-decreasing cutwidth; ties by smaller subtree
    /// size, then lexicographic root label, then original position.
    fn sorted_children(&mut self, v: usize) -> Vec<usize> {
        let mut children = self.dag.vertices[v].children.clone();
        let keys: BTreeMap<usize, (u64, u128, String)> = children
            .iter()
            .map(|&c| (c, (self.dcw(c), self.size(c), self.dag.vertices[c].axiom.to_string())))
            .collect();
        children.sort_by(|a, b| keys[a].cmp(&keys[b]));
        children
    }
}

/// Size, depth, justification size and bushiness of the unraveled tree.
pub fn compute_basic(tree: &ProofTree) -> BasicMeasures {
    let dag = &tree.dag;
    let mut memo = Memo::new(dag);
    let size = memo.size(dag.root);
    let depth = memo.depth(dag.root);
    let mut justification: BTreeSet<Axiom> = BTreeSet::new();
    let mut stack = vec![dag.root];
    let mut seen = vec![false; dag.vertices.len()];
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if dag.vertices[v].children.is_empty() && dag.vertices[v].rule == "asserted" {
            justification.insert(dag.vertices[v].axiom.canonicalize());
        }
        stack.extend(dag.vertices[v].children.iter().copied());
    }
    BasicMeasures {
        size,
        depth,
        justification_size: justification.len(),
        bushiness: rat_u128(size) / rat_u128(depth as u128 + 1),
    }
}

/// Directed cutwidth by the polynomial bottom-up recurrence, plus the
/// witness standard serialization when the tree is materialized. The
/// serialization indexes tree nodes in preorder of the materialized tree.
pub fn cutwidth_standard(tree: &ProofTree) -> (u64, Option<Serialization>) {
    let mut memo = Memo::new(&tree.dag);
    let value = memo.dcw(tree.dag.root);
    let witness = tree.root.as_ref().map(|root| {
        let n = root.size();
        let n = usize::try_from(n).expect("materialized tree fits in memory");
        // preorder ids over the materialized tree
        let mut order = Vec::with_capacity(n);
        standard_order(&mut memo, root, &mut 0, &mut order);
        let mut positions = vec![0usize; n];
        for (pos, &id) in order.iter().enumerate() {
            positions[id] = pos;
        }
        Serialization { order, positions }
    });
    (value, witness)
}

/// Emits the standard serialization of `node`, assigning preorder ids on
/// the fly (`counter` is the next free id in preorder over the original
/// child order).
fn standard_order(memo: &mut Memo<'_>, node: &TreeNode, counter: &mut usize, out: &mut Vec<usize>) {
    // first assign preorder ids to this node and, implicitly, its subtree
    let my_id = *counter;
    *counter += 1;
    let mut child_ids = Vec::with_capacity(node.children.len());
    for child in &node.children {
        child_ids.push((*counter, child));
        *counter += usize::try_from(child.size()).expect("materialized tree fits in memory");
    }
    out.push(my_id);
    // then emit child subtrees in non-decreasing cutwidth order
    child_ids.sort_by_cached_key(|(_, child)| {
        (
            memo.dcw(child.vertex),
            memo.size(child.vertex),
            memo.dag.vertices[child.vertex].axiom.to_string(),
        )
    });
    for (id, child) in child_ids {
        let mut sub_counter = id;
        standard_order(memo, child, &mut sub_counter, out);
    }
}

/// Parent-to-child edges of a materialized tree, over preorder ids.
pub fn tree_edges(root: &TreeNode) -> Vec<(usize, usize)> {
    fn go(node: &TreeNode, counter: &mut usize, out: &mut Vec<(usize, usize)>) {
        let my_id = *counter;
        *counter += 1;
        for child in &node.children {
            out.push((my_id, *counter));
            go(child, counter, out);
        }
    }
    let mut out = Vec::new();
    go(root, &mut 0, &mut out);
    out
}

/// `max_gap_cut` of a serialization: the largest number of edges crossing
/// any gap between consecutive positions.
pub fn max_gap_cut(edges: &[(usize, usize)], positions: &[usize]) -> u64 {
    let n = positions.len();
    if n <= 1 {
        return 0;
    }
    let mut cuts = vec![0u64; n - 1];
    for &(v, w) in edges {
        let (a, b) = (positions[v].min(positions[w]), positions[v].max(positions[w]));
        for cut in cuts.iter_mut().take(b).skip(a) {
            *cut += 1;
        }
    }
    cuts.into_iter().max().unwrap_or(0)
}

/// Exact minimum cutwidth over all topological serializations, by
/// exhaustive enumeration. Limited to 12 tree vertices.
pub fn cutwidth_bruteforce(tree: &ProofTree) -> Result<u64, MetricsError> {
    let root = tree.root.as_ref().ok_or(MetricsError::ImplicitTree)?;
    let size = root.size();
    if size > 12 {
        return Err(MetricsError::TooLarge(size));
    }
    let n = size as usize;
    let edges = tree_edges(root);
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for &(v, w) in &edges {
        children[v].push(w);
        parent[w] = Some(v);
    }
    let mut positions = vec![usize::MAX; n];
    let mut placed = vec![false; n];
    let mut best = u64::MAX;
    search(&edges, &children, &parent, &mut positions, &mut placed, 0, 0, &mut best);
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn search(
    edges: &[(usize, usize)],
    children: &[Vec<usize>],
    parent: &[Option<usize>],
    positions: &mut [usize],
    placed: &mut [bool],
    next_pos: usize,
    current_max: u64,
    best: &mut u64,
) {
    let n = positions.len();
    if current_max >= *best {
        return;
    }
    if next_pos == n {
        *best = current_max;
        return;
    }
    for v in 0..n {
        if placed[v] || parent[v].map(|p| !placed[p]).unwrap_or(false) {
            continue;
        }
        positions[v] = next_pos;
        placed[v] = true;
        // cut across the gap after position next_pos: edges with exactly
        // one endpoint placed
        let mut cut = 0u64;
        for &(a, b) in edges {
            if placed[a] != placed[b] {
                cut += 1;
            }
        }
        let _ = children;
        search(
            edges,
            children,
            parent,
            positions,
            placed,
            next_pos + 1,
            current_max.max(cut),
            best,
        );
        placed[v] = false;
        positions[v] = usize::MAX;
    }
}

/// The axiom-shape class used by the step-complexity score.
fn shape(ax: &Axiom) -> u8 {
    match ax {
        Axiom::ConceptInclusion(_, _) => 0,
        Axiom::RoleInclusion(_, _) => 1,
        Axiom::RoleChainInclusion(_, _) => 2,
        Axiom::Equivalence(_, _) => 3,
        Axiom::Transitivity(_) => 4,
        Axiom::Domain(_, _) => 5,
    }
}

fn axiom_concepts(ax: &Axiom) -> Vec<&Concept> {
    match ax {
        Axiom::ConceptInclusion(l, r) => vec![l, r],
        Axiom::Equivalence(a, b) => vec![a, b],
        Axiom::Domain(_, c) => vec![c],
        _ => Vec::new(),
    }
}

fn uses_triviality(ax: &Axiom) -> bool {
    let sides: Vec<(&Concept, &Concept)> = match ax {
        Axiom::ConceptInclusion(l, r) => vec![(l, r)],
        Axiom::Equivalence(a, b) => vec![(a, b), (b, a)],
        _ => Vec::new(),
    };
    sides.iter().any(|(l, r)| {
        **r == Concept::Bottom
            || **l == Concept::Top
            || l.subconcepts().contains(&Concept::Bottom)
    })
}

/// Weighted syntactic score of one inference step:
/// `w_premises·#premises + w_axiom_shapes·#distinct shapes +
/// w_constructors·#distinct constructors of {⊓, ∃, ⊤, ⊥} +
/// w_depth·max nesting depth + w_triviality·[⊥ on a left side or alone on a
/// right side, or ⊤ alone on a left side]`.
pub fn step_complexity(conclusion: &Axiom, premises: &[Axiom], w: &StepWeights) -> BigRational {
    let axioms: Vec<&Axiom> = premises.iter().chain(core::iter::once(conclusion)).collect();
    let shapes: BTreeSet<u8> = axioms.iter().map(|ax| shape(ax)).collect();
    let mut constructors: BTreeSet<u8> = BTreeSet::new();
    let mut max_depth: u64 = 0;
    for ax in &axioms {
        for c in axiom_concepts(ax) {
            max_depth = max_depth.max(c.nesting_depth() as u64);
            for sub in c.subconcepts() {
                match sub {
                    Concept::Conjunction(_) => {
                        constructors.insert(0);
                    }
                    Concept::Existential(_, _) => {
                        constructors.insert(1);
                    }
                    Concept::Top => {
                        constructors.insert(2);
                    }
                    Concept::Bottom => {
                        constructors.insert(3);
                    }
                    _ => {}
                }
            }
        }
    }
    let trivial = axioms.iter().any(|ax| uses_triviality(ax));
    &w.premises * rat_u128(premises.len() as u128)
        + &w.axiom_shapes * rat_u128(shapes.len() as u128)
        + &w.constructors * rat_u128(constructors.len() as u128)
        + &w.depth * rat_u128(max_depth as u128)
        + if trivial { w.triviality.clone() } else { BigRational::zero() }
}

/// Mean step complexity over all internal node occurrences of the unraveled
/// tree (leaves excluded); 0 for proofs without steps.
pub fn avg_step_complexity(tree: &ProofTree, w: &StepWeights) -> BigRational {
    let (sum, count) = step_sums(&tree.dag, w);
    if count.is_zero() {
        BigRational::zero()
    } else {
        sum / BigRational::from_integer(count)
    }
}

/// `(Σ SC over internal tree occurrences, #internal tree occurrences)` by
/// the compositional recurrence `f(v) = own(v) + Σ f(children)`.
fn step_sums(dag: &ProofDag, w: &StepWeights) -> (BigRational, BigInt) {
    fn go(
        dag: &ProofDag,
        w: &StepWeights,
        v: usize,
        memo: &mut Vec<Option<(BigRational, BigInt)>>,
    ) -> (BigRational, BigInt) {
        if let Some(p) = &memo[v] {
            return p.clone();
        }
        let vx = &dag.vertices[v];
        let (mut sum, mut count) = if vx.children.is_empty() {
            (BigRational::zero(), BigInt::from(0))
        } else {
            let premises: Vec<Axiom> =
                vx.children.iter().map(|&c| dag.vertices[c].axiom.clone()).collect();
            (step_complexity(&vx.axiom, &premises, w), BigInt::from(1))
        };
        for &c in &vx.children {
            let (s, n) = go(dag, w, c, memo);
            sum += s;
            count += n;
        }
        memo[v] = Some((sum.clone(), count.clone()));
        (sum, count)
    }
    let mut memo = vec![None; dag.vertices.len()];
    go(dag, w, dag.root, &mut memo)
}

/// All report fields of a proof in one pass.
pub fn metrics_report(tree: &ProofTree, weights: &StepWeights) -> MetricsReport {
    let basic = compute_basic(tree);
    let (cutwidth, _) = cutwidth_standard(tree);
    let avg = avg_step_complexity(tree, weights);
    let (_, count) = step_sums(&tree.dag, weights);
    let step_count = u128::try_from(count).unwrap_or(u128::MAX);
    MetricsReport {
        size: basic.size,
        depth: basic.depth,
        justification_size: basic.justification_size,
        bushiness: basic.bushiness,
        cutwidth,
        avg_step_complexity: avg,
        step_count,
    }
}
