//! EL+⊥ / ELH⊥ syntax, parsing and normalization.

mod axiom;
mod concept;
mod normalize;
mod parser;

pub use axiom::{Axiom, TBox};
pub use concept::Concept;
pub use normalize::{
    negative_occurrences, normalize, role_hierarchy_closure, Calculus, Denormalized,
    DenormalizeError, NormalizeError, NormalizedTBox,
};
pub use parser::{parse_axiom, parse_tbox, ParseError, ParseErrorKind};
