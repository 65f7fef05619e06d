//! Saturation engines: each calculus run to fixpoint over a normalized TBox,
//! recording every distinct rule application as provenance.

mod engine;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ontology::{
    normalize, Axiom, Calculus, Concept, NormalizeError, NormalizedTBox, TBox,
};

/// Index of a fact in its [`DerivationGraph`].
pub type FactId = usize;

/// A statement derived during saturation. Constituents are names, ⊤, ⊥ or
/// aliases of the normalized TBox; complex sides are in shallow normal form
/// with canonically ordered conjunctions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    /// Inclusion between two atoms.
    SubClass(Concept, Concept),
    /// Inclusion with at least one shallow complex side (`C ⊑ ∃r.E`,
    /// `C ⊑ D₁⊓D₂`, `∃r.E ⊑ C`, `D₁⊓D₂ ⊑ C`).
    SubClassComplex(Concept, Concept),
    /// elk's `C →r E`.
    Link(Concept, String, Concept),
    /// elk's `init(C)`.
    Init(Concept),
}

impl Fact {
    /// Builds an inclusion fact, canonicalizing both sides and picking the
    /// variant by atomicity.
    pub fn sub(lhs: Concept, rhs: Concept) -> Fact {
        let l = lhs.canonicalize();
        let r = rhs.canonicalize();
        if l.is_atomic() && r.is_atomic() {
            Fact::SubClass(l, r)
        } else {
            Fact::SubClassComplex(l, r)
        }
    }

    pub fn as_sub(&self) -> Option<(&Concept, &Concept)> {
        match self {
            Fact::SubClass(l, r) | Fact::SubClassComplex(l, r) => Some((l, r)),
            _ => None,
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::SubClass(l, r) | Fact::SubClassComplex(l, r) => write!(f, "{l} ⊑ {r}"),
            Fact::Link(src, role, dst) => write!(f, "{src} →{role} {dst}"),
            Fact::Init(c) => write!(f, "init({c})"),
        }
    }
}

/// One rule application. `premises` are positions in the graph, ordered as in
/// the rule schema; `side_axioms` hold the `… ∈ T` side conditions and the
/// `r ⊑* s` pairs (as `RoleInclusion`), also in schema order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Derivation {
    pub rule: &'static str,
    pub premises: Vec<FactId>,
    pub side_axioms: Vec<Axiom>,
}

impl Derivation {
    pub fn new(rule: &'static str, premises: Vec<FactId>, side_axioms: Vec<Axiom>) -> Self {
        Derivation { rule, premises, side_axioms }
    }
}

/// All facts derived by a saturation run together with every recorded rule
/// application. Facts are kept in insertion order; per fact, derivations are
/// kept in insertion order without duplicate (rule, premises, sides) triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationGraph {
    facts: Vec<Fact>,
    index: BTreeMap<Fact, FactId>,
    derivations: Vec<Vec<Derivation>>,
    seeds: Vec<FactId>,
}

impl DerivationGraph {
    pub(crate) fn new() -> Self {
        DerivationGraph {
            facts: Vec::new(),
            index: BTreeMap::new(),
            derivations: Vec::new(),
            seeds: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn fact(&self, id: FactId) -> &Fact {
        &self.facts[id]
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn id_of(&self, fact: &Fact) -> Option<FactId> {
        self.index.get(fact).copied()
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.index.contains_key(fact)
    }

    pub fn derivations(&self, id: FactId) -> &[Derivation] {
        &self.derivations[id]
    }

    /// The facts introduced with zero premises.
    pub fn seeds(&self) -> &[FactId] {
        &self.seeds
    }

    /// Returns the id and whether the fact is new.
    pub(crate) fn insert_fact(&mut self, fact: Fact) -> (FactId, bool) {
        if let Some(&id) = self.index.get(&fact) {
            return (id, false);
        }
        let id = self.facts.len();
        self.index.insert(fact.clone(), id);
        self.facts.push(fact);
        self.derivations.push(Vec::new());
        (id, true)
    }

    pub(crate) fn add_derivation(&mut self, id: FactId, d: Derivation) {
        if !self.derivations[id].contains(&d) {
            if d.premises.is_empty() && !self.seeds.contains(&id) {
                self.seeds.push(id);
            }
            self.derivations[id].push(d);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SaturationError {
    Normalize(NormalizeError),
    /// The derived-fact count exceeded the configured cap.
    ResourceLimit(usize),
    /// `entails` only accepts inclusions between atomic concepts of the input
    /// signature (or with ⊤/⊥ sides) and equivalences between names.
    UnsupportedGoal(String),
}

impl fmt::Display for SaturationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SaturationError::Normalize(e) => write!(f, "{e}"),
            SaturationError::ResourceLimit(cap) => {
                write!(f, "saturation exceeded the fact limit of {cap}")
            }
            SaturationError::UnsupportedGoal(msg) => write!(f, "unsupported goal: {msg}"),
        }
    }
}

impl From<NormalizeError> for SaturationError {
    fn from(e: NormalizeError) -> Self {
        SaturationError::Normalize(e)
    }
}

#[derive(Debug, Clone)]
pub struct SaturationParams {
    /// Cap on the number of derived facts.
    pub max_facts: usize,
    /// For the elk calculus: seed `init` only for this concept name instead
    /// of every main name.
    pub goal_directed: Option<String>,
}

impl Default for SaturationParams {
    fn default() -> Self {
        SaturationParams { max_facts: 10_000_000, goal_directed: None }
    }
}

/// Runs the calculus selected by `ntbox` to fixpoint with default parameters.
pub fn saturate(ntbox: &NormalizedTBox) -> Result<DerivationGraph, SaturationError> {
    saturate_with(ntbox, &SaturationParams::default())
}

pub fn saturate_with(
    ntbox: &NormalizedTBox,
    params: &SaturationParams,
) -> Result<DerivationGraph, SaturationError> {
    engine::run(ntbox, params)
}

/// All entailed `A ⊑ B` pairs over the main concept names, excluding the
/// tautological `(A, A)` pairs. `(A, B)` is included iff `A ⊑ B` or `A ⊑ ⊥`
/// is in the saturation.
pub fn classify(
    tbox: &TBox,
    calculus: Calculus,
) -> Result<BTreeSet<(String, String)>, SaturationError> {
    classify_with(tbox, calculus, &SaturationParams::default())
}

pub fn classify_with(
    tbox: &TBox,
    calculus: Calculus,
    params: &SaturationParams,
) -> Result<BTreeSet<(String, String)>, SaturationError> {
    let ntbox = normalize(tbox, calculus)?;
    let graph = saturate_with(&ntbox, params)?;
    let names = ntbox.main_concepts();
    let mut pairs = BTreeSet::new();
    for a in names {
        let lhs = Concept::named(a);
        let unsat = graph.contains(&Fact::SubClass(lhs.clone(), Concept::Bottom));
        for b in names {
            if a == b {
                continue;
            }
            if unsat || graph.contains(&Fact::SubClass(lhs.clone(), Concept::named(b))) {
                pairs.insert((a.clone(), b.clone()));
            }
        }
    }
    Ok(pairs)
}

/// Result of an entailment check: whether the goal holds and the saturation
/// facts witnessing it (one per inclusion direction, when present).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentCheck {
    pub holds: bool,
    pub witnesses: Vec<Fact>,
}

/// Checks a single goal axiom: a `ConceptInclusion` between atomic concepts
/// or an `Equivalence` between names. Complex goal concepts are rejected.
pub fn entails(
    tbox: &TBox,
    calculus: Calculus,
    goal: &Axiom,
) -> Result<EntailmentCheck, SaturationError> {
    entails_with(tbox, calculus, goal, &SaturationParams::default())
}

pub fn entails_with(
    tbox: &TBox,
    calculus: Calculus,
    goal: &Axiom,
    params: &SaturationParams,
) -> Result<EntailmentCheck, SaturationError> {
    let ntbox = normalize(tbox, calculus)?;
    let check_atom = |c: &Concept| -> Result<(), SaturationError> {
        match c {
            Concept::Top | Concept::Bottom => Ok(()),
            Concept::Named(n) if ntbox.main_concepts().contains(n) => Ok(()),
            Concept::Named(n) => Err(SaturationError::UnsupportedGoal(alloc::format!(
                "concept name {n} does not occur in the ontology"
            ))),
            other => Err(SaturationError::UnsupportedGoal(alloc::format!(
                "complex goal concept {other}"
            ))),
        }
    };
    let directions: Vec<(Concept, Concept)> = match goal {
        Axiom::ConceptInclusion(l, r) => {
            check_atom(l)?;
            check_atom(r)?;
            alloc::vec![(l.clone(), r.clone())]
        }
        Axiom::Equivalence(Concept::Named(a), Concept::Named(b)) => {
            check_atom(&Concept::named(a))?;
            check_atom(&Concept::named(b))?;
            alloc::vec![
                (Concept::named(a), Concept::named(b)),
                (Concept::named(b), Concept::named(a)),
            ]
        }
        other => {
            return Err(SaturationError::UnsupportedGoal(alloc::format!(
                "goal must be a concept inclusion or an equivalence between names, got {other}"
            )))
        }
    };

    let mut params = params.clone();
    if calculus == Calculus::Elk {
        if let Some(goal_lhs) = &params.goal_directed {
            // goal-directed seeding only makes sense for the goal's own lhs
            let wanted = directions.iter().any(|(l, _)| match l {
                Concept::Named(n) => n == goal_lhs,
                _ => false,
            });
            if !wanted || directions.len() > 1 {
                params.goal_directed = None;
            }
        }
    }
    let graph = saturate_with(&ntbox, &params)?;

    let mut holds = true;
    let mut witnesses = Vec::new();
    for (l, r) in &directions {
        let direct = Fact::SubClass(l.clone(), r.clone());
        let unsat = Fact::SubClass(l.clone(), Concept::Bottom);
        let dir_holds = *r == Concept::Top
            || *l == Concept::Bottom
            || graph.contains(&direct)
            || graph.contains(&unsat);
        holds &= dir_holds;
        if graph.contains(&direct) {
            witnesses.push(direct);
        } else if dir_holds && graph.contains(&unsat) {
            witnesses.push(unsat);
        }
    }
    if !holds {
        witnesses.clear();
    }
    Ok(EntailmentCheck { holds, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_tbox;
    use alloc::string::ToString;
    use alloc::vec;

    const EXAMPLE: &str = "\
SubClassOf(A B)
SubClassOf(B ObjectSomeValuesFrom(r C))
SubClassOf(C D)
SubClassOf(ObjectSomeValuesFrom(t D) E)
SubObjectPropertyOf(r s)
SubObjectPropertyOf(s t)
";

    fn pairs(items: &[(&str, &str)]) -> BTreeSet<(String, String)> {
        items
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn example_classification_agrees_across_calculi() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let expected = pairs(&[("A", "B"), ("A", "E"), ("B", "E"), ("C", "D")]);
        for calc in Calculus::ALL {
            assert_eq!(classify(&tbox, calc).unwrap(), expected, "{calc}");
        }
    }

    #[test]
    fn elk_derives_goal_from_init() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let ntbox = normalize(&tbox, Calculus::Elk).unwrap();
        let graph = saturate(&ntbox).unwrap();
        let goal = graph
            .id_of(&Fact::SubClass(Concept::named("A"), Concept::named("E")))
            .expect("A ⊑ E derived");
        // the goal must be reachable (backwards) from init(A)
        let mut stack = vec![goal];
        let mut seen = BTreeSet::new();
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            for d in graph.derivations(id) {
                stack.extend(d.premises.iter().copied());
            }
        }
        let init = graph.id_of(&Fact::Init(Concept::named("A"))).unwrap();
        assert!(seen.contains(&init));
    }

    #[test]
    fn elk_bottom_rule_records_link_premises() {
        let tbox = parse_tbox("SubClassOf(A ObjectSomeValuesFrom(r B))\nSubClassOf(B owl:Nothing)").unwrap();
        let ntbox = normalize(&tbox, Calculus::Elk).unwrap();
        let graph = saturate(&ntbox).unwrap();
        let bot = graph
            .id_of(&Fact::SubClass(Concept::named("A"), Concept::Bottom))
            .expect("A ⊑ ⊥ derived");
        let link = graph
            .id_of(&Fact::Link(Concept::named("A"), "r".to_string(), Concept::named("B")))
            .unwrap();
        let b_bot = graph
            .id_of(&Fact::SubClass(Concept::named("B"), Concept::Bottom))
            .unwrap();
        assert!(graph
            .derivations(bot)
            .iter()
            .any(|d| d.rule == "R_bot" && d.premises == vec![link, b_bot]));
    }

    #[test]
    fn empty_tbox_envelope_has_only_seeds() {
        let ntbox = normalize(&TBox::default(), Calculus::Envelope).unwrap();
        let graph = saturate(&ntbox).unwrap();
        // ⊤⊑⊤, ⊥⊑⊥ and ⊥⊑⊤ over the empty signature
        assert_eq!(graph.len(), 3);
        assert_eq!(graph.seeds().len(), 3);
        assert!(classify(&TBox::default(), Calculus::Envelope).unwrap().is_empty());
    }

    #[test]
    fn unsatisfiable_concept_is_below_everything() {
        let tbox =
            parse_tbox("SubClassOf(A ObjectSomeValuesFrom(r B))\nSubClassOf(B owl:Nothing)\nSubClassOf(C C)")
                .unwrap();
        let expected = pairs(&[("A", "B"), ("A", "C"), ("B", "A"), ("B", "C")]);
        for calc in Calculus::ALL {
            assert_eq!(classify(&tbox, calc).unwrap(), expected, "{calc}");
        }
    }

    #[test]
    fn entails_example_goal() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let goal = Axiom::sub(Concept::named("A"), Concept::named("E"));
        for calc in Calculus::ALL {
            let check = entails(&tbox, calc, &goal).unwrap();
            assert!(check.holds, "{calc}");
            assert_eq!(
                check.witnesses,
                vec![Fact::SubClass(Concept::named("A"), Concept::named("E"))]
            );
        }
    }

    #[test]
    fn entails_rejects_wrong_direction() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let goal = Axiom::sub(Concept::named("E"), Concept::named("A"));
        let check = entails(&tbox, Calculus::Envelope, &goal).unwrap();
        assert!(!check.holds);
        assert!(check.witnesses.is_empty());
    }

    #[test]
    fn entails_equivalence_needs_both_directions() {
        let tbox = parse_tbox("SubClassOf(A B)\nSubClassOf(B A)").unwrap();
        let goal = Axiom::Equivalence(Concept::named("A"), Concept::named("B"));
        let check = entails(&tbox, Calculus::Textbook, &goal).unwrap();
        assert!(check.holds);
        assert_eq!(check.witnesses.len(), 2);

        let one_way = parse_tbox("SubClassOf(A B)").unwrap();
        assert!(!entails(&one_way, Calculus::Textbook, &goal).unwrap().holds);
    }

    #[test]
    fn entails_rejects_complex_goals() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let goal = Axiom::sub(Concept::named("A"), Concept::some("r", Concept::named("C")));
        assert!(matches!(
            entails(&tbox, Calculus::Elk, &goal),
            Err(SaturationError::UnsupportedGoal(_))
        ));
        let foreign = Axiom::sub(Concept::named("Z"), Concept::named("A"));
        assert!(matches!(
            entails(&tbox, Calculus::Elk, &foreign),
            Err(SaturationError::UnsupportedGoal(_))
        ));
    }

    #[test]
    fn entails_top_goal_holds_without_fact() {
        let tbox = parse_tbox("SubClassOf(A B)").unwrap();
        let goal = Axiom::sub(Concept::named("A"), Concept::Top);
        let check = entails(&tbox, Calculus::Elk, &goal).unwrap();
        assert!(check.holds);
    }

    #[test]
    fn goal_directed_seeding_restricts_init() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let ntbox = normalize(&tbox, Calculus::Elk).unwrap();
        let params = SaturationParams {
            goal_directed: Some("A".to_string()),
            ..SaturationParams::default()
        };
        let graph = saturate_with(&ntbox, &params).unwrap();
        assert!(graph.contains(&Fact::Init(Concept::named("A"))));
        assert!(graph.contains(&Fact::SubClass(Concept::named("A"), Concept::named("E"))));
        // B is never a link target, so it is never initialized
        assert!(!graph.contains(&Fact::Init(Concept::named("B"))));
    }

    #[test]
    fn textbook_propagates_chain_rejection() {
        let tbox = parse_tbox(
            "SubObjectPropertyOf(ObjectPropertyChain(r s) t)\nSubClassOf(A B)",
        )
        .unwrap();
        assert!(matches!(
            classify(&tbox, Calculus::Textbook),
            Err(SaturationError::Normalize(_))
        ));
    }

    #[test]
    fn resource_limit_is_enforced() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let ntbox = normalize(&tbox, Calculus::Elk).unwrap();
        let params = SaturationParams { max_facts: 3, ..SaturationParams::default() };
        assert!(matches!(
            saturate_with(&ntbox, &params),
            Err(SaturationError::ResourceLimit(3))
        ));
    }

    #[test]
    fn saturation_is_deterministic() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        for calc in Calculus::ALL {
            let ntbox = normalize(&tbox, calc).unwrap();
            let a = saturate(&ntbox).unwrap();
            let b = saturate(&ntbox).unwrap();
            assert_eq!(a, b, "{calc}");
        }
    }

    #[test]
    fn transitivity_and_domain_classify() {
        let tbox = parse_tbox(
            "TransitiveObjectProperty(r)\n\
             SubClassOf(A ObjectSomeValuesFrom(r B))\n\
             SubClassOf(B ObjectSomeValuesFrom(r C))\n\
             SubClassOf(ObjectSomeValuesFrom(r C) D)\n\
             ObjectPropertyDomain(r E)",
        )
        .unwrap();
        // A ⊑ ∃r.B ⊑ ∃r.∃r.C gives A ⊑ ∃r.C by transitivity, hence A ⊑ D;
        // the domain axiom puts A and B below E
        let expected = pairs(&[("A", "D"), ("A", "E"), ("B", "D"), ("B", "E")]);
        for calc in [Calculus::Elk, Calculus::Envelope] {
            assert_eq!(classify(&tbox, calc).unwrap(), expected, "{calc}");
        }
    }

    #[test]
    fn conjunction_classify() {
        let tbox = parse_tbox(
            "SubClassOf(A ObjectIntersectionOf(B C))\n\
             SubClassOf(ObjectIntersectionOf(C B) D)",
        )
        .unwrap();
        let expected = pairs(&[("A", "B"), ("A", "C"), ("A", "D")]);
        for calc in Calculus::ALL {
            assert_eq!(classify(&tbox, calc).unwrap(), expected, "{calc}");
        }
    }

    #[test]
    fn nested_existential_classify() {
        let tbox = parse_tbox(
            "SubClassOf(A ObjectSomeValuesFrom(r ObjectSomeValuesFrom(s B)))\n\
             SubClassOf(ObjectSomeValuesFrom(r ObjectSomeValuesFrom(s B)) C)",
        )
        .unwrap();
        let expected = pairs(&[("A", "C")]);
        for calc in Calculus::ALL {
            assert_eq!(classify(&tbox, calc).unwrap(), expected, "{calc}");
        }
    }

    #[test]
    fn equivalence_classify() {
        let tbox = parse_tbox("EquivalentClasses(A ObjectIntersectionOf(B C))").unwrap();
        let expected = pairs(&[("A", "B"), ("A", "C")]);
        for calc in Calculus::ALL {
            assert_eq!(classify(&tbox, calc).unwrap(), expected, "{calc}");
        }
    }
}
