//! Randomized properties of the saturation engines: the three calculi agree
//! on classification, and classification is monotone under axiom addition.

use elproofs_core::ontology::{Axiom, Calculus, Concept, TBox};
use elproofs_core::saturation::classify;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 5] = ["A", "B", "C", "D", "E"];
const ROLES: [&str; 3] = ["r", "s", "t"];

fn rand_atom(rng: &mut ChaCha8Rng) -> Concept {
    match rng.gen_range(0..20) {
        0 => Concept::Top,
        1 => Concept::Bottom,
        n => Concept::named(NAMES[n % NAMES.len()]),
    }
}

fn rand_concept(rng: &mut ChaCha8Rng, depth: u32) -> Concept {
    let pick = rng.gen_range(0..100);
    if depth == 0 || pick < 50 {
        rand_atom(rng)
    } else if pick < 75 {
        let role = ROLES[rng.gen_range(0..ROLES.len())];
        Concept::some(role, rand_concept(rng, depth - 1))
    } else {
        Concept::and(vec![
            rand_concept(rng, depth - 1),
            rand_concept(rng, depth - 1),
        ])
    }
}

fn rand_axiom(rng: &mut ChaCha8Rng, with_chains: bool) -> Axiom {
    let role = |rng: &mut ChaCha8Rng| ROLES[rng.gen_range(0..ROLES.len())].to_string();
    let top = if with_chains { 12 } else { 10 };
    match rng.gen_range(0..top) {
        0..=6 => Axiom::ConceptInclusion(rand_concept(rng, 2), rand_concept(rng, 2)),
        7 => Axiom::RoleInclusion(role(rng), role(rng)),
        8 => Axiom::Equivalence(rand_concept(rng, 1), rand_concept(rng, 1)),
        9 => Axiom::Domain(role(rng), rand_concept(rng, 1)),
        10 => Axiom::Transitivity(role(rng)),
        _ => Axiom::RoleChainInclusion(vec![role(rng), role(rng)], role(rng)),
    }
}

fn rand_tbox(rng: &mut ChaCha8Rng, n_axioms: usize, with_chains: bool) -> TBox {
    let mut tbox = TBox::default();
    for _ in 0..n_axioms {
        tbox.insert(rand_axiom(rng, with_chains));
    }
    tbox
}

#[test]
fn cross_calculus_agreement_without_chains() {
    for seed in 0..80u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tbox = rand_tbox(&mut rng, 6, false);
        let elk = classify(&tbox, Calculus::Elk).unwrap();
        let textbook = classify(&tbox, Calculus::Textbook).unwrap();
        let envelope = classify(&tbox, Calculus::Envelope).unwrap();
        assert_eq!(elk, textbook, "seed {seed}: elk vs textbook on\n{}", tbox.serialize());
        assert_eq!(elk, envelope, "seed {seed}: elk vs envelope on\n{}", tbox.serialize());
    }
}

#[test]
fn elk_envelope_agreement_with_chains() {
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let tbox = rand_tbox(&mut rng, 6, true);
        let elk = classify(&tbox, Calculus::Elk).unwrap();
        let envelope = classify(&tbox, Calculus::Envelope).unwrap();
        assert_eq!(elk, envelope, "seed {seed}: elk vs envelope on\n{}", tbox.serialize());
    }
}

#[test]
fn classification_is_monotone() {
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let tbox = rand_tbox(&mut rng, 5, false);
        let extra = rand_axiom(&mut rng, false);
        let mut larger = tbox.clone();
        larger.insert(extra.clone());
        for calc in Calculus::ALL {
            let before = classify(&tbox, calc).unwrap();
            let after = classify(&larger, calc).unwrap();
            assert!(
                after.is_superset(&before),
                "seed {seed} ({calc}): adding {extra} removed entailments from\n{}",
                tbox.serialize()
            );
        }
    }
}
