use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::Concept;

/// An EL+⊥ axiom, including the convenience forms (`Transitivity`, `Domain`,
/// `Equivalence`) that normalization desugars away.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    ConceptInclusion(Concept, Concept),
    RoleInclusion(String, String),
    /// Chain length is at least 2; length-1 chains are `RoleInclusion`.
    RoleChainInclusion(Vec<String>, String),
    Equivalence(Concept, Concept),
    Transitivity(String),
    Domain(String, Concept),
}

impl Axiom {
    pub fn sub(lhs: Concept, rhs: Concept) -> Self {
        Axiom::ConceptInclusion(lhs, rhs)
    }

    /// Canonicalizes the concepts inside the axiom (conjunction flattening
    /// and sorting). Role axioms are unaffected.
    pub fn canonicalize(&self) -> Axiom {
        match self {
            Axiom::ConceptInclusion(l, r) => {
                Axiom::ConceptInclusion(l.canonicalize(), r.canonicalize())
            }
            Axiom::Equivalence(a, b) => Axiom::Equivalence(a.canonicalize(), b.canonicalize()),
            Axiom::Domain(r, c) => Axiom::Domain(r.clone(), c.canonicalize()),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::ConceptInclusion(l, r) => write!(f, "SubClassOf({l} {r})"),
            Axiom::RoleInclusion(s, t) => write!(f, "SubObjectPropertyOf({s} {t})"),
            Axiom::RoleChainInclusion(chain, sup) => {
                write!(f, "SubObjectPropertyOf(ObjectPropertyChain(")?;
                for (i, r) in chain.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, ") {sup})")
            }
            Axiom::Equivalence(a, b) => write!(f, "EquivalentClasses({a} {b})"),
            Axiom::Transitivity(r) => write!(f, "TransitiveObjectProperty({r})"),
            Axiom::Domain(r, c) => write!(f, "ObjectPropertyDomain({r} {c})"),
        }
    }
}

/// A finite set of axioms together with its syntactic signature.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TBox {
    axioms: Vec<Axiom>,
}

impl TBox {
    pub fn new(axioms: Vec<Axiom>) -> Self {
        let mut tbox = TBox { axioms: Vec::new() };
        for ax in axioms {
            tbox.insert(ax);
        }
        tbox
    }

    pub fn insert(&mut self, axiom: Axiom) {
        if !self.axioms.contains(&axiom) {
            self.axioms.push(axiom);
        }
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    /// Concept names syntactically occurring in the axioms.
    pub fn concept_names(&self) -> BTreeSet<String> {
        let mut names = BTreeSet::new();
        for ax in &self.axioms {
            for c in axiom_concepts(ax) {
                for sub in c.subconcepts() {
                    if let Concept::Named(n) = sub {
                        names.insert(n);
                    }
                }
            }
        }
        names
    }

    /// Role names syntactically occurring in the axioms.
    pub fn role_names(&self) -> BTreeSet<String> {
        let mut names = BTreeSet::new();
        for ax in &self.axioms {
            match ax {
                Axiom::RoleInclusion(s, t) => {
                    names.insert(s.clone());
                    names.insert(t.clone());
                }
                Axiom::RoleChainInclusion(chain, sup) => {
                    names.extend(chain.iter().cloned());
                    names.insert(sup.clone());
                }
                Axiom::Transitivity(r) => {
                    names.insert(r.clone());
                }
                Axiom::Domain(r, c) => {
                    names.insert(r.clone());
                    names.extend(c.roles());
                }
                Axiom::ConceptInclusion(l, r) => {
                    names.extend(l.roles());
                    names.extend(r.roles());
                }
                Axiom::Equivalence(a, b) => {
                    names.extend(a.roles());
                    names.extend(b.roles());
                }
            }
        }
        names
    }

    /// Membership test modulo conjunction canonicalization.
    pub fn contains_canonical(&self, axiom: &Axiom) -> bool {
        let canon = axiom.canonicalize();
        self.axioms.iter().any(|ax| ax.canonicalize() == canon)
    }

    /// Serializes the TBox in the line-oriented functional syntax.
    pub fn serialize(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        for ax in &self.axioms {
            let _ = writeln!(out, "{ax}");
        }
        out
    }
}

/// The concepts appearing directly in an axiom.
pub(crate) fn axiom_concepts(ax: &Axiom) -> Vec<&Concept> {
    match ax {
        Axiom::ConceptInclusion(l, r) => alloc::vec![l, r],
        Axiom::Equivalence(a, b) => alloc::vec![a, b],
        Axiom::Domain(_, c) => alloc::vec![c],
        _ => Vec::new(),
    }
}
