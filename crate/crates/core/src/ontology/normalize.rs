use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{Axiom, Concept, TBox};

/// The three calculi. `elk` covers EL+⊥, `textbook` covers ELH⊥ (simple role
/// inclusions only), `envelope` covers EL+⊥ without nominals and concrete
/// domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Calculus {
    Elk,
    Textbook,
    Envelope,
}

impl Calculus {
    pub const ALL: [Calculus; 3] = [Calculus::Elk, Calculus::Textbook, Calculus::Envelope];

    pub fn name(&self) -> &'static str {
        match self {
            Calculus::Elk => "elk",
            Calculus::Textbook => "textbook",
            Calculus::Envelope => "envelope",
        }
    }

    pub fn from_name(name: &str) -> Option<Calculus> {
        match name {
            "elk" => Some(Calculus::Elk),
            "textbook" => Some(Calculus::Textbook),
            "envelope" => Some(Calculus::Envelope),
            _ => None,
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    /// The calculus cannot handle a feature of the input (textbook with role
    /// chains).
    Unsupported(String),
}

impl fmt::Display for NormalizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizeError::Unsupported(msg) => write!(f, "unsupported feature: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DenormalizeError {
    UnknownName(String),
}

impl fmt::Display for DenormalizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DenormalizeError::UnknownName(n) => write!(f, "unknown name: {n}"),
        }
    }
}

/// Result of denormalizing an axiom: either a proper DL axiom over the input
/// signature, or a marker for alias-definition axioms that denormalize to
/// trivialities and must be omitted from proofs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Denormalized {
    Axiom(Axiom),
    Tautology,
}

/// A TBox brought into the normal form expected by one calculus, together
/// with the bookkeeping the later stages need: alias maps for fresh names,
/// the negative-occurrence sets and the (restricted) role hierarchy.
#[derive(Debug, Clone)]
pub struct NormalizedTBox {
    pub calculus: Calculus,
    norm_axioms: Vec<Axiom>,
    /// Fresh concept name → shallow image (operands are names, ⊤, ⊥ or
    /// further aliases).
    alias_concepts: BTreeMap<String, Concept>,
    /// Fresh role name → the input-role sequence it abbreviates.
    alias_roles: BTreeMap<String, Vec<String>>,
    /// Canonicalized concepts occurring on the left-hand side of some input
    /// concept inclusion.
    negative_concepts: BTreeSet<Concept>,
    /// Seed set of the role-hierarchy closure: negatively occurring roles
    /// plus roles in chain-lhs position of normalized chain axioms.
    negative_roles: BTreeSet<String>,
    role_hierarchy: BTreeSet<(String, String)>,
    main_concepts: BTreeSet<String>,
    main_roles: BTreeSet<String>,
}

impl NormalizedTBox {
    pub fn norm_axioms(&self) -> &[Axiom] {
        &self.norm_axioms
    }

    pub fn alias_concepts(&self) -> &BTreeMap<String, Concept> {
        &self.alias_concepts
    }

    pub fn alias_roles(&self) -> &BTreeMap<String, Vec<String>> {
        &self.alias_roles
    }

    pub fn negative_concepts(&self) -> &BTreeSet<Concept> {
        &self.negative_concepts
    }

    pub fn negative_roles(&self) -> &BTreeSet<String> {
        &self.negative_roles
    }

    pub fn role_hierarchy(&self) -> &BTreeSet<(String, String)> {
        &self.role_hierarchy
    }

    /// Concept names of the input signature (no aliases).
    pub fn main_concepts(&self) -> &BTreeSet<String> {
        &self.main_concepts
    }

    pub fn main_roles(&self) -> &BTreeSet<String> {
        &self.main_roles
    }

    pub fn is_alias_concept(&self, name: &str) -> bool {
        self.alias_concepts.contains_key(name)
    }

    pub fn is_alias_role(&self, name: &str) -> bool {
        self.alias_roles.contains_key(name)
    }

    /// Replaces every alias in `c` by its image, recursively, and
    /// canonicalizes the result.
    pub fn expand_concept(&self, c: &Concept) -> Result<Concept, DenormalizeError> {
        Ok(self.expand_concept_raw(c)?.canonicalize())
    }

    fn expand_concept_raw(&self, c: &Concept) -> Result<Concept, DenormalizeError> {
        match c {
            Concept::Top | Concept::Bottom => Ok(c.clone()),
            Concept::Named(n) => {
                if let Some(image) = self.alias_concepts.get(n) {
                    self.expand_concept_raw(image)
                } else if self.main_concepts.contains(n) {
                    Ok(c.clone())
                } else {
                    Err(DenormalizeError::UnknownName(n.clone()))
                }
            }
            Concept::Conjunction(ops) => {
                let expanded = ops
                    .iter()
                    .map(|op| self.expand_concept_raw(op))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Concept::Conjunction(expanded))
            }
            Concept::Existential(role, filler) => {
                let filler = self.expand_concept_raw(filler)?;
                let roles = self.expand_role(role)?;
                let mut result = filler;
                for r in roles.iter().rev() {
                    result = Concept::some(r, result);
                }
                Ok(result)
            }
        }
    }

    /// A fresh role expands to the role sequence it abbreviates; an input
    /// role to itself.
    pub fn expand_role(&self, role: &str) -> Result<Vec<String>, DenormalizeError> {
        if let Some(seq) = self.alias_roles.get(role) {
            Ok(seq.clone())
        } else if self.main_roles.contains(role) {
            Ok(alloc::vec![role.to_string()])
        } else {
            Err(DenormalizeError::UnknownName(role.to_string()))
        }
    }

    fn mentions_alias(&self, ax: &Axiom) -> bool {
        let concept_has_alias = |c: &Concept| {
            c.subconcepts().iter().any(|s| match s {
                Concept::Named(n) => self.is_alias_concept(n),
                _ => false,
            }) || c.roles().iter().any(|r| self.is_alias_role(r))
        };
        match ax {
            Axiom::ConceptInclusion(l, r) => concept_has_alias(l) || concept_has_alias(r),
            Axiom::Equivalence(a, b) => concept_has_alias(a) || concept_has_alias(b),
            Axiom::RoleInclusion(s, t) => self.is_alias_role(s) || self.is_alias_role(t),
            Axiom::RoleChainInclusion(chain, sup) => {
                chain.iter().any(|r| self.is_alias_role(r)) || self.is_alias_role(sup)
            }
            Axiom::Domain(r, c) => self.is_alias_role(r) || concept_has_alias(c),
            Axiom::Transitivity(r) => self.is_alias_role(r),
        }
    }

    /// Replaces fresh names by the concepts/role sequences they denote.
    /// Alias-definition axioms that denormalize to trivialities (equal sides,
    /// or a role composition on the right) become [`Denormalized::Tautology`].
    /// Axioms without alias names are returned unchanged.
    pub fn denormalize_axiom(&self, ax: &Axiom) -> Result<Denormalized, DenormalizeError> {
        let had_alias = self.mentions_alias(ax);
        match ax {
            Axiom::ConceptInclusion(l, r) => {
                let lhs = self.expand_concept(l)?;
                let rhs = self.expand_concept(r)?;
                if had_alias && lhs == rhs {
                    Ok(Denormalized::Tautology)
                } else if had_alias {
                    Ok(Denormalized::Axiom(Axiom::ConceptInclusion(lhs, rhs)))
                } else {
                    Ok(Denormalized::Axiom(ax.clone()))
                }
            }
            Axiom::Equivalence(a, b) => {
                let a2 = self.expand_concept(a)?;
                let b2 = self.expand_concept(b)?;
                if had_alias && a2 == b2 {
                    Ok(Denormalized::Tautology)
                } else if had_alias {
                    Ok(Denormalized::Axiom(Axiom::Equivalence(a2, b2)))
                } else {
                    Ok(Denormalized::Axiom(ax.clone()))
                }
            }
            Axiom::RoleInclusion(sub, sup) => {
                let sub_seq = self.expand_role(sub)?;
                let sup_seq = self.expand_role(sup)?;
                if sup_seq.len() > 1 {
                    // role composition on the right-hand side
                    return Ok(Denormalized::Tautology);
                }
                if !had_alias {
                    return Ok(Denormalized::Axiom(ax.clone()));
                }
                if sub_seq.len() == 1 {
                    Ok(Denormalized::Axiom(Axiom::RoleInclusion(
                        sub_seq[0].clone(),
                        sup_seq[0].clone(),
                    )))
                } else {
                    Ok(Denormalized::Axiom(Axiom::RoleChainInclusion(
                        sub_seq,
                        sup_seq[0].clone(),
                    )))
                }
            }
            Axiom::RoleChainInclusion(chain, sup) => {
                let sup_seq = self.expand_role(sup)?;
                if sup_seq.len() > 1 {
                    return Ok(Denormalized::Tautology);
                }
                if !had_alias {
                    return Ok(Denormalized::Axiom(ax.clone()));
                }
                let mut expanded = Vec::new();
                for r in chain {
                    expanded.extend(self.expand_role(r)?);
                }
                Ok(Denormalized::Axiom(Axiom::RoleChainInclusion(
                    expanded,
                    sup_seq[0].clone(),
                )))
            }
            Axiom::Transitivity(_) | Axiom::Domain(_, _) => {
                // desugared before normalization; never appear in norm axioms
                Ok(Denormalized::Axiom(ax.clone()))
            }
        }
    }
}

/// All subconcepts of left-hand sides of concept inclusions (both sides of
/// equivalences, and the implicit `∃r.⊤` of domain axioms), plus the roles
/// occurring inside those subconcepts. Concepts are canonicalized.
pub fn negative_occurrences(tbox: &TBox) -> (BTreeSet<Concept>, BTreeSet<String>) {
    let mut concepts = BTreeSet::new();
    let mut roles = BTreeSet::new();
    let mut add_lhs = |c: &Concept| {
        let canon = c.canonicalize();
        for sub in canon.subconcepts() {
            for r in sub.roles() {
                roles.insert(r);
            }
            concepts.insert(sub);
        }
    };
    for ax in tbox.axioms() {
        match ax {
            Axiom::ConceptInclusion(l, _) => add_lhs(l),
            Axiom::Equivalence(a, b) => {
                add_lhs(a);
                add_lhs(b);
            }
            Axiom::Domain(r, _) => {
                add_lhs(&Concept::some(r, Concept::Top));
            }
            _ => {}
        }
    }
    (concepts, roles)
}

/// Top-down restricted role hierarchy: the smallest set containing `(r, r)`
/// for every seed role, and `(r, t)` whenever `r ⊑ s ∈ T` (simple) and
/// `(s, t)` is in the set.
pub fn role_hierarchy_closure(
    tbox: &TBox,
    negative_roles: &BTreeSet<String>,
) -> BTreeSet<(String, String)> {
    let mut set: BTreeSet<(String, String)> = negative_roles
        .iter()
        .map(|r| (r.clone(), r.clone()))
        .collect();
    let simple: Vec<(&String, &String)> = tbox
        .axioms()
        .iter()
        .filter_map(|ax| match ax {
            Axiom::RoleInclusion(sub, sup) => Some((sub, sup)),
            _ => None,
        })
        .collect();
    loop {
        let mut added = false;
        let mut new_pairs = Vec::new();
        for (sub, sup) in &simple {
            for (s, t) in &set {
                if s == *sup {
                    let pair = ((*sub).clone(), t.clone());
                    if !set.contains(&pair) {
                        new_pairs.push(pair);
                    }
                }
            }
        }
        for p in new_pairs {
            if set.insert(p) {
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    set
}

struct Normalizer {
    calculus: Calculus,
    concept_counter: usize,
    role_counter: usize,
    alias_by_concept: BTreeMap<Concept, String>,
    alias_concepts: BTreeMap<String, Concept>,
    alias_roles: BTreeMap<String, Vec<String>>,
    axioms: Vec<Axiom>,
    emitted: BTreeSet<Axiom>,
}

impl Normalizer {
    fn emit(&mut self, ax: Axiom) {
        if self.emitted.insert(ax.clone()) {
            self.axioms.push(ax);
        }
    }

    fn fresh_concept(&mut self) -> String {
        let name = alloc::format!("_C{:03}", self.concept_counter);
        self.concept_counter += 1;
        name
    }

    fn fresh_role(&mut self) -> String {
        let name = alloc::format!("_R{:03}", self.role_counter);
        self.role_counter += 1;
        name
    }

    /// Maps a canonical concept to an atom, creating an alias (and, outside
    /// the elk calculus, its definitional axioms) for complex concepts.
    /// Aliases are numbered in pre-order: the outer concept gets its number
    /// before its subconcepts.
    fn atomize(&mut self, c: &Concept) -> Concept {
        if c.is_atomic() {
            return c.clone();
        }
        if let Some(name) = self.alias_by_concept.get(c) {
            return Concept::Named(name.clone());
        }
        let name = self.fresh_concept();
        self.alias_by_concept.insert(c.clone(), name.clone());
        let image = match c {
            Concept::Existential(role, filler) => {
                let a = self.atomize(filler);
                Concept::Existential(role.clone(), alloc::boxed::Box::new(a))
            }
            Concept::Conjunction(ops) => {
                let a1 = self.atomize(&ops[0]);
                let a2 = if ops.len() == 2 {
                    self.atomize(&ops[1])
                } else {
                    self.atomize(&Concept::Conjunction(ops[1..].to_vec()))
                };
                Concept::Conjunction(alloc::vec![a1, a2])
            }
            _ => unreachable!(),
        };
        self.alias_concepts.insert(name.clone(), image.clone());
        if self.calculus != Calculus::Elk {
            let alias = Concept::Named(name.clone());
            match &image {
                Concept::Existential(_, _) => {
                    self.emit(Axiom::sub(alias.clone(), image.clone()));
                    self.emit(Axiom::sub(image.clone(), alias));
                }
                Concept::Conjunction(ops) => {
                    self.emit(Axiom::sub(alias.clone(), ops[0].clone()));
                    self.emit(Axiom::sub(alias.clone(), ops[1].clone()));
                    self.emit(Axiom::sub(image.clone(), alias));
                }
                _ => unreachable!(),
            }
        }
        Concept::Named(name)
    }

    fn normalize_inclusion(&mut self, lhs: &Concept, rhs: &Concept) {
        if self.calculus == Calculus::Elk {
            let l = self.atomize(lhs);
            let r = self.atomize(rhs);
            self.emit(Axiom::sub(l, r));
            return;
        }
        // textbook / envelope: split conjunctions on the right first
        if let Concept::Conjunction(ops) = rhs {
            for op in ops.clone() {
                self.normalize_inclusion(lhs, &op);
            }
            return;
        }
        let shallow_lhs = match lhs {
            c if c.is_atomic() => c.clone(),
            Concept::Existential(role, filler) => {
                let a = self.atomize(filler);
                Concept::Existential(role.clone(), alloc::boxed::Box::new(a))
            }
            Concept::Conjunction(ops) => {
                let a1 = self.atomize(&ops[0]);
                let a2 = if ops.len() == 2 {
                    self.atomize(&ops[1])
                } else {
                    self.atomize(&Concept::Conjunction(ops[1..].to_vec()))
                };
                Concept::Conjunction(alloc::vec![a1, a2])
            }
            _ => unreachable!(),
        };
        let shallow_rhs = match rhs {
            c if c.is_atomic() => c.clone(),
            Concept::Existential(role, filler) if lhs.is_atomic() => {
                let a = self.atomize(filler);
                Concept::Existential(role.clone(), alloc::boxed::Box::new(a))
            }
            // complex ⊑ complex: alias the right-hand side
            other => self.atomize(other),
        };
        self.emit(Axiom::sub(shallow_lhs, shallow_rhs));
    }

    /// Decomposes a role chain of length > 2 left-to-right with fresh role
    /// names, emitting only binary chains.
    fn normalize_chain(&mut self, chain: &[String], sup: &str) {
        debug_assert!(chain.len() >= 2);
        if chain.len() == 2 {
            self.emit(Axiom::RoleChainInclusion(chain.to_vec(), sup.to_string()));
            return;
        }
        let mut prefix_role = {
            let fresh = self.fresh_role();
            self.alias_roles.insert(fresh.clone(), chain[..2].to_vec());
            self.emit(Axiom::RoleChainInclusion(chain[..2].to_vec(), fresh.clone()));
            fresh
        };
        for (i, next) in chain.iter().enumerate().skip(2) {
            if i + 1 == chain.len() {
                self.emit(Axiom::RoleChainInclusion(
                    alloc::vec![prefix_role.clone(), next.clone()],
                    sup.to_string(),
                ));
            } else {
                let fresh = self.fresh_role();
                self.alias_roles.insert(fresh.clone(), chain[..=i].to_vec());
                self.emit(Axiom::RoleChainInclusion(
                    alloc::vec![prefix_role.clone(), next.clone()],
                    fresh.clone(),
                ));
                prefix_role = fresh;
            }
        }
    }
}

/// Brings a TBox into the normal form of the given calculus. Desugars
/// transitivity, domain and equivalence axioms, decomposes long role chains,
/// introduces fresh names for complex subconcepts and seeds `⊥ ⊑ A` for
/// every input concept name.
pub fn normalize(tbox: &TBox, calculus: Calculus) -> Result<NormalizedTBox, NormalizeError> {
    let (negative_concepts, concept_negative_roles) = negative_occurrences(tbox);
    let main_concepts = tbox.concept_names();
    let main_roles = tbox.role_names();

    // desugar, then sort lexicographically for a reproducible fresh-name order
    let mut desugared: Vec<Axiom> = Vec::new();
    for ax in tbox.axioms() {
        match ax {
            Axiom::Transitivity(r) => desugared.push(Axiom::RoleChainInclusion(
                alloc::vec![r.clone(), r.clone()],
                r.clone(),
            )),
            Axiom::Domain(r, c) => desugared.push(Axiom::ConceptInclusion(
                Concept::some(r, Concept::Top),
                c.clone(),
            )),
            Axiom::Equivalence(a, b) => {
                desugared.push(Axiom::ConceptInclusion(a.clone(), b.clone()));
                desugared.push(Axiom::ConceptInclusion(b.clone(), a.clone()));
            }
            other => desugared.push(other.clone()),
        }
    }
    desugared.sort_by_key(|ax| ax.to_string());
    desugared.dedup();

    let mut norm = Normalizer {
        calculus,
        concept_counter: 0,
        role_counter: 0,
        alias_by_concept: BTreeMap::new(),
        alias_concepts: BTreeMap::new(),
        alias_roles: BTreeMap::new(),
        axioms: Vec::new(),
        emitted: BTreeSet::new(),
    };

    for ax in &desugared {
        match ax {
            Axiom::ConceptInclusion(l, r) => {
                let lhs = l.canonicalize();
                let rhs = r.canonicalize();
                norm.normalize_inclusion(&lhs, &rhs);
            }
            Axiom::RoleInclusion(sub, sup) => {
                norm.emit(Axiom::RoleInclusion(sub.clone(), sup.clone()));
            }
            Axiom::RoleChainInclusion(chain, sup) => {
                if calculus == Calculus::Textbook {
                    return Err(NormalizeError::Unsupported(alloc::format!(
                        "role chain {} in the textbook calculus (simple role inclusions only)",
                        ax
                    )));
                }
                norm.normalize_chain(chain, sup);
            }
            Axiom::Transitivity(_) | Axiom::Domain(_, _) | Axiom::Equivalence(_, _) => {
                unreachable!("desugared above")
            }
        }
    }

    // ⊥ ⊑ A for every input concept name, so classification is complete for
    // inconsistent concepts
    for name in &main_concepts {
        norm.emit(Axiom::sub(Concept::Bottom, Concept::Named(name.clone())));
    }

    // closure seeds: negatively occurring roles, chain-lhs roles, and roles
    // in ∃-lhs position of normal-form axioms; these are the roles the
    // composition and CR5' rules look up via ⊑*
    let mut negative_roles = concept_negative_roles;
    for ax in &norm.axioms {
        match ax {
            Axiom::RoleChainInclusion(chain, _) => {
                for r in chain {
                    negative_roles.insert(r.clone());
                }
            }
            Axiom::ConceptInclusion(Concept::Existential(r, _), _) => {
                negative_roles.insert(r.clone());
            }
            _ => {}
        }
    }
    let role_hierarchy = role_hierarchy_closure(tbox, &negative_roles);

    Ok(NormalizedTBox {
        calculus,
        norm_axioms: norm.axioms,
        alias_concepts: norm.alias_concepts,
        alias_roles: norm.alias_roles,
        negative_concepts,
        negative_roles,
        role_hierarchy,
        main_concepts,
        main_roles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_tbox;
    use alloc::vec;

    const EXAMPLE: &str = "\
SubClassOf(A B)
SubClassOf(B ObjectSomeValuesFrom(r C))
SubClassOf(C D)
SubClassOf(ObjectSomeValuesFrom(t D) E)
SubObjectPropertyOf(r s)
SubObjectPropertyOf(s t)
";

    #[test]
    fn negative_occurrences_of_example() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let (concepts, roles) = negative_occurrences(&tbox);
        let expected: BTreeSet<Concept> = [
            Concept::named("A"),
            Concept::named("B"),
            Concept::named("C"),
            Concept::named("D"),
            Concept::some("t", Concept::named("D")),
        ]
        .into_iter()
        .collect();
        assert_eq!(concepts, expected);
        assert_eq!(roles, ["t".to_string()].into_iter().collect());
    }

    #[test]
    fn negative_occurrences_empty() {
        let (concepts, roles) = negative_occurrences(&TBox::default());
        assert!(concepts.is_empty());
        assert!(roles.is_empty());
    }

    #[test]
    fn negative_occurrences_domain() {
        let tbox = parse_tbox("ObjectPropertyDomain(r C)").unwrap();
        let (concepts, roles) = negative_occurrences(&tbox);
        let expected: BTreeSet<Concept> =
            [Concept::some("r", Concept::Top), Concept::Top].into_iter().collect();
        assert_eq!(concepts, expected);
        assert_eq!(roles, ["r".to_string()].into_iter().collect());
    }

    #[test]
    fn closure_of_example_hierarchy() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let neg: BTreeSet<String> = ["t".to_string()].into_iter().collect();
        let closure = role_hierarchy_closure(&tbox, &neg);
        let expected: BTreeSet<(String, String)> = [("t", "t"), ("s", "t"), ("r", "t")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(closure, expected);
    }

    #[test]
    fn closure_without_seeds_is_empty() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        assert!(role_hierarchy_closure(&tbox, &BTreeSet::new()).is_empty());
    }

    #[test]
    fn closure_three_step_chain() {
        let tbox = parse_tbox(
            "SubObjectPropertyOf(r s)\nSubObjectPropertyOf(s t)\nSubObjectPropertyOf(t u)\n",
        )
        .unwrap();
        let neg: BTreeSet<String> = ["u".to_string()].into_iter().collect();
        let closure = role_hierarchy_closure(&tbox, &neg);
        let expected: BTreeSet<(String, String)> =
            [("u", "u"), ("t", "u"), ("s", "u"), ("r", "u")]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect();
        assert_eq!(closure, expected);
    }

    #[test]
    fn chain_decomposition_introduces_fresh_role() {
        let tbox = parse_tbox("SubObjectPropertyOf(ObjectPropertyChain(r s t) u)").unwrap();
        let n = normalize(&tbox, Calculus::Elk).unwrap();
        let chains: Vec<&Axiom> = n
            .norm_axioms()
            .iter()
            .filter(|ax| matches!(ax, Axiom::RoleChainInclusion(_, _)))
            .collect();
        assert_eq!(
            chains,
            vec![
                &Axiom::RoleChainInclusion(vec!["r".into(), "s".into()], "_R000".into()),
                &Axiom::RoleChainInclusion(vec!["_R000".into(), "t".into()], "u".into()),
            ]
        );
        assert_eq!(
            n.alias_roles().get("_R000"),
            Some(&vec!["r".to_string(), "s".to_string()])
        );
    }

    #[test]
    fn transitivity_desugars_to_binary_chain() {
        let tbox = parse_tbox("TransitiveObjectProperty(r)\nSubClassOf(A ObjectSomeValuesFrom(r B))").unwrap();
        let n = normalize(&tbox, Calculus::Envelope).unwrap();
        assert!(n
            .norm_axioms()
            .iter()
            .any(|ax| *ax == Axiom::RoleChainInclusion(vec!["r".into(), "r".into()], "r".into())));
    }

    #[test]
    fn already_normal_axiom_kept() {
        let tbox = parse_tbox("SubClassOf(ObjectSomeValuesFrom(t D) E)").unwrap();
        for calc in Calculus::ALL {
            let n = normalize(&tbox, calc).unwrap();
            match calc {
                Calculus::Elk => {
                    // elk atomizes the left-hand side
                    assert!(n
                        .norm_axioms()
                        .iter()
                        .any(|ax| *ax == Axiom::sub(Concept::named("_C000"), Concept::named("E"))));
                }
                _ => {
                    assert!(n
                        .norm_axioms()
                        .iter()
                        .any(|ax| *ax
                            == Axiom::sub(Concept::some("t", Concept::named("D")), Concept::named("E"))));
                }
            }
        }
    }

    #[test]
    fn textbook_rejects_chains() {
        let tbox = parse_tbox("SubObjectPropertyOf(ObjectPropertyChain(r s) t)").unwrap();
        assert!(matches!(
            normalize(&tbox, Calculus::Textbook),
            Err(NormalizeError::Unsupported(_))
        ));
    }

    #[test]
    fn bottom_seeding_present_for_all_calculi() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        for calc in Calculus::ALL {
            let n = normalize(&tbox, calc).unwrap();
            for name in ["A", "B", "C", "D", "E"] {
                assert!(
                    n.norm_axioms()
                        .iter()
                        .any(|ax| *ax == Axiom::sub(Concept::Bottom, Concept::named(name))),
                    "{calc}: missing bottom seed for {name}"
                );
            }
        }
    }

    #[test]
    fn textbook_norm_axioms_are_in_normal_form() {
        let text = "\
SubClassOf(A ObjectIntersectionOf(B ObjectSomeValuesFrom(r ObjectIntersectionOf(C D E))))
SubClassOf(ObjectSomeValuesFrom(r ObjectSomeValuesFrom(s A)) B)
";
        let tbox = parse_tbox(text).unwrap();
        for calc in [Calculus::Textbook, Calculus::Envelope] {
            let n = normalize(&tbox, calc).unwrap();
            for ax in n.norm_axioms() {
                if let Axiom::ConceptInclusion(l, r) = ax {
                    let lhs_ok = l.is_atomic()
                        || matches!(l, Concept::Existential(_, f) if f.is_atomic())
                        || matches!(l, Concept::Conjunction(ops)
                            if ops.len() == 2 && ops.iter().all(Concept::is_atomic));
                    let rhs_ok = r.is_atomic()
                        || matches!(r, Concept::Existential(_, f) if f.is_atomic());
                    assert!(lhs_ok && rhs_ok, "{calc}: axiom not normal: {ax}");
                }
            }
        }
    }

    #[test]
    fn denormalize_alias_concept() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let n = normalize(&tbox, Calculus::Elk).unwrap();
        // find the alias for ∃t.D
        let target = Concept::some("t", Concept::named("D"));
        let alias = n
            .alias_concepts()
            .iter()
            .find(|(_, img)| **img == target)
            .map(|(name, _)| name.clone())
            .expect("alias for ∃t.D");
        let ax = Axiom::sub(Concept::named("A"), Concept::Named(alias));
        assert_eq!(
            n.denormalize_axiom(&ax).unwrap(),
            Denormalized::Axiom(Axiom::sub(Concept::named("A"), target))
        );
    }

    #[test]
    fn denormalize_fresh_role_nests_existentials() {
        let tbox = parse_tbox(
            "SubObjectPropertyOf(ObjectPropertyChain(r s t) u)\nSubClassOf(C ObjectSomeValuesFrom(r D))",
        )
        .unwrap();
        let n = normalize(&tbox, Calculus::Elk).unwrap();
        let ax = Axiom::sub(Concept::named("C"), Concept::some("_R000", Concept::named("D")));
        assert_eq!(
            n.denormalize_axiom(&ax).unwrap(),
            Denormalized::Axiom(Axiom::sub(
                Concept::named("C"),
                Concept::some("r", Concept::some("s", Concept::named("D")))
            ))
        );
    }

    #[test]
    fn denormalize_chain_definition_is_tautology() {
        let tbox = parse_tbox("SubObjectPropertyOf(ObjectPropertyChain(r s t) u)").unwrap();
        let n = normalize(&tbox, Calculus::Elk).unwrap();
        let ax = Axiom::RoleChainInclusion(vec!["r".into(), "s".into()], "_R000".into());
        assert_eq!(n.denormalize_axiom(&ax).unwrap(), Denormalized::Tautology);
    }

    #[test]
    fn denormalize_is_identity_without_aliases() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let n = normalize(&tbox, Calculus::Elk).unwrap();
        for ax in tbox.axioms() {
            assert_eq!(
                n.denormalize_axiom(ax).unwrap(),
                Denormalized::Axiom(ax.clone())
            );
        }
    }

    #[test]
    fn denormalize_unknown_name_errors() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let n = normalize(&tbox, Calculus::Elk).unwrap();
        let ax = Axiom::sub(Concept::named("Z"), Concept::named("A"));
        assert!(matches!(
            n.denormalize_axiom(&ax),
            Err(DenormalizeError::UnknownName(_))
        ));
    }

    #[test]
    fn role_hierarchy_is_transitive_and_reflexive_on_seeds() {
        let tbox = parse_tbox(EXAMPLE).unwrap();
        let n = normalize(&tbox, Calculus::Elk).unwrap();
        let h = n.role_hierarchy();
        for (a, b) in h {
            for (c, d) in h {
                if b == c {
                    assert!(h.contains(&(a.clone(), d.clone())));
                }
            }
        }
        for r in n.negative_roles() {
            assert!(h.contains(&(r.clone(), r.clone())));
        }
    }
}
