use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// An EL+⊥ concept. Conjunctions are n-ary with at least two operands;
/// structural equality is plain tree equality, so `A ⊓ B` and `B ⊓ A` are
/// distinct until [`Concept::canonicalize`] is applied.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Named(String),
    Conjunction(Vec<Concept>),
    Existential(String, Box<Concept>),
}

impl Concept {
    pub fn named(name: &str) -> Self {
        Concept::Named(String::from(name))
    }

    pub fn some(role: &str, filler: Concept) -> Self {
        Concept::Existential(String::from(role), Box::new(filler))
    }

    pub fn and(operands: Vec<Concept>) -> Self {
        debug_assert!(operands.len() >= 2);
        Concept::Conjunction(operands)
    }

    /// True for ⊤, ⊥ and concept names (the "pseudo-name" shapes allowed in
    /// normal forms).
    pub fn is_atomic(&self) -> bool {
        matches!(self, Concept::Top | Concept::Bottom | Concept::Named(_))
    }

    /// Flattens nested conjunctions, sorts operands and removes duplicate
    /// operands, recursively. Commutatively equal conjunctions become
    /// structurally equal.
    pub fn canonicalize(&self) -> Concept {
        match self {
            Concept::Top | Concept::Bottom | Concept::Named(_) => self.clone(),
            Concept::Existential(r, c) => Concept::Existential(r.clone(), Box::new(c.canonicalize())),
            Concept::Conjunction(ops) => {
                let mut flat: Vec<Concept> = Vec::new();
                for op in ops {
                    match op.canonicalize() {
                        Concept::Conjunction(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                flat.dedup();
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    Concept::Conjunction(flat)
                }
            }
        }
    }

    /// All subconcepts including `self`, in pre-order.
    pub fn subconcepts(&self) -> Vec<Concept> {
        let mut out = Vec::new();
        self.collect_subconcepts(&mut out);
        out
    }

    fn collect_subconcepts(&self, out: &mut Vec<Concept>) {
        out.push(self.clone());
        match self {
            Concept::Conjunction(ops) => {
                for op in ops {
                    op.collect_subconcepts(out);
                }
            }
            Concept::Existential(_, c) => c.collect_subconcepts(out),
            _ => {}
        }
    }

    /// All role names occurring in the concept.
    pub fn roles(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_roles(&mut out);
        out
    }

    fn collect_roles(&self, out: &mut Vec<String>) {
        match self {
            Concept::Existential(r, c) => {
                out.push(r.clone());
                c.collect_roles(out);
            }
            Concept::Conjunction(ops) => {
                for op in ops {
                    op.collect_roles(out);
                }
            }
            _ => {}
        }
    }

    /// Nesting depth: atoms are 0, `∃r.C` is `1 + depth(C)`, a conjunction is
    /// `1 + max(depth of operands)`.
    pub fn nesting_depth(&self) -> u32 {
        match self {
            Concept::Top | Concept::Bottom | Concept::Named(_) => 0,
            Concept::Existential(_, c) => 1 + c.nesting_depth(),
            Concept::Conjunction(ops) => {
                1 + ops.iter().map(|c| c.nesting_depth()).max().unwrap_or(0)
            }
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => write!(f, "owl:Thing"),
            Concept::Bottom => write!(f, "owl:Nothing"),
            Concept::Named(n) => write!(f, "{n}"),
            Concept::Conjunction(ops) => {
                write!(f, "ObjectIntersectionOf(")?;
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{op}")?;
                }
                write!(f, ")")
            }
            Concept::Existential(r, c) => write!(f, "ObjectSomeValuesFrom({r} {c})"),
        }
    }
}
