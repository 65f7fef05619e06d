//! Consequence-based reasoning for the EL family of description logics.
//!
//! The crate is split into four layers that mirror the processing pipeline:
//!
//! * [`ontology`] — syntax trees for EL+⊥ concepts and axioms, a parser and
//!   printer for the line-oriented functional syntax, and normalization into
//!   the normal forms expected by the calculi.
//! * [`saturation`] — three rule calculi (`elk`, `textbook`, `envelope`) run
//!   to fixpoint over a normalized TBox, recording every rule application.
//! * [`proofs`] — lifting derivation graphs to DL-level proofs, minimal and
//!   first-trace extraction, tree unraveling and validation.
//! * [`metrics`] — proof shape measures: size, depth, justification size,
//!   bushiness, directed cutwidth and average step complexity.
//!
//! The crate is `no_std` (with `alloc`); all IO lives in the companion CLI
//! crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod metrics;
pub mod ontology;
pub mod proofs;
pub mod saturation;

pub use metrics::{metrics_report, MetricsReport, StepWeights};
pub use ontology::{Axiom, Calculus, Concept, NormalizedTBox, TBox};
pub use proofs::{build_proof, unravel, ProofDag, ProofMode, ProofTree};
pub use saturation::{classify, entails, SaturationParams};

