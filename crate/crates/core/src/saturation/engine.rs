//! Round-based semi-naive evaluation of the three calculi.
//!
//! Each round applies every rule, in a fixed rule order, to the facts added in the
//! previous round, joining against everything derived so far. Conclusions are
//! buffered and flushed at the end of the round, so a rule instance fires in
//! the round after its youngest premise and is recorded exactly once (the
//! per-fact derivation lists deduplicate instances that are enumerated from
//! two delta premises).

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Derivation, DerivationGraph, Fact, FactId, SaturationError, SaturationParams};
use crate::ontology::{Axiom, Calculus, Concept, NormalizedTBox};

type Out = Vec<(Fact, Derivation)>;

pub(super) fn run(
    nt: &NormalizedTBox,
    params: &SaturationParams,
) -> Result<DerivationGraph, SaturationError> {
    let mut engine = Engine::new(nt, params);
    engine.seed()?;
    engine.run()?;
    Ok(engine.graph)
}

struct Engine<'a> {
    nt: &'a NormalizedTBox,
    graph: DerivationGraph,
    max_facts: usize,
    goal_directed: Option<String>,
    top_negative: bool,
    /// Canonicalized shallow image per alias.
    alias_canon: BTreeMap<String, Concept>,

    // TBox indices over the normalized axioms
    /// elk: lhs (as shallow key) → (rhs atom, axiom).
    elk_sub_ax: BTreeMap<Concept, Vec<(Concept, Axiom)>>,
    /// elk: operand key → (partner key, operand position, conclusion conjunction)
    /// for negatively occurring conjunction aliases.
    neg_conj: BTreeMap<Concept, Vec<(Concept, usize, Concept)>>,
    /// elk: filler key → (role, conclusion existential) for negatively
    /// occurring existential aliases.
    neg_ex: BTreeMap<Concept, Vec<(String, Concept)>>,
    /// envelope: atom lhs → (atom rhs, axiom).
    env_sub_ax: BTreeMap<Concept, Vec<(Concept, Axiom)>>,
    /// envelope: conjunction operand → (position, partner, rhs, axiom).
    env_conj_ax: BTreeMap<Concept, Vec<(usize, Concept, Concept, Axiom)>>,
    /// envelope: atom lhs → (role, filler, axiom) for `A ⊑ ∃r.B ∈ T`.
    env_ex_rhs_ax: BTreeMap<Concept, Vec<(String, Concept, Axiom)>>,
    /// envelope: (role, filler) → (rhs, axiom) for `∃r.A ⊑ B ∈ T`.
    env_ex_lhs_ax: BTreeMap<(String, Concept), Vec<(Concept, Axiom)>>,
    /// envelope: role → (super-role, axiom).
    env_role_sub_ax: BTreeMap<String, Vec<(String, Axiom)>>,
    /// binary chain axioms (r₁, r₂, s, axiom) for `r₁∘r₂ ⊑ s ∈ T`.
    chain_ax: Vec<(String, String, String, Axiom)>,

    // fact indices, maintained incrementally
    sub_by_lhs: BTreeMap<Concept, Vec<(FactId, Concept)>>,
    sub_by_rhs: BTreeMap<Concept, Vec<(FactId, Concept)>>,
    ex_rhs_by_filler: BTreeMap<Concept, Vec<(FactId, Concept, String)>>,
    ex_lhs_by_filler: BTreeMap<Concept, Vec<(FactId, String, Concept)>>,
    conj_lhs_by_operand: BTreeMap<Concept, Vec<(FactId, usize, Concept, Concept)>>,
    links_by_src: BTreeMap<Concept, Vec<(FactId, String, Concept)>>,
    links_by_dst: BTreeMap<Concept, Vec<(FactId, Concept, String)>>,
}

impl<'a> Engine<'a> {
    fn new(nt: &'a NormalizedTBox, params: &SaturationParams) -> Self {
        let mut e = Engine {
            nt,
            graph: DerivationGraph::new(),
            max_facts: params.max_facts,
            goal_directed: params.goal_directed.clone(),
            top_negative: nt.negative_concepts().contains(&Concept::Top),
            alias_canon: BTreeMap::new(),
            elk_sub_ax: BTreeMap::new(),
            neg_conj: BTreeMap::new(),
            neg_ex: BTreeMap::new(),
            env_sub_ax: BTreeMap::new(),
            env_conj_ax: BTreeMap::new(),
            env_ex_rhs_ax: BTreeMap::new(),
            env_ex_lhs_ax: BTreeMap::new(),
            env_role_sub_ax: BTreeMap::new(),
            chain_ax: Vec::new(),
            sub_by_lhs: BTreeMap::new(),
            sub_by_rhs: BTreeMap::new(),
            ex_rhs_by_filler: BTreeMap::new(),
            ex_lhs_by_filler: BTreeMap::new(),
            conj_lhs_by_operand: BTreeMap::new(),
            links_by_src: BTreeMap::new(),
            links_by_dst: BTreeMap::new(),
        };
        for (name, image) in nt.alias_concepts() {
            e.alias_canon.insert(name.clone(), image.canonicalize());
        }
        e.build_tbox_indices();
        e
    }

    fn build_tbox_indices(&mut self) {
        let calculus = self.nt.calculus;
        for ax in self.nt.norm_axioms() {
            match ax {
                Axiom::ConceptInclusion(l, r) => match calculus {
                    Calculus::Elk => {
                        let key = self.shallow_key(l);
                        self.elk_sub_ax
                            .entry(key)
                            .or_default()
                            .push((r.clone(), ax.clone()));
                    }
                    Calculus::Envelope => match (l, r) {
                        (l, r) if l.is_atomic() && r.is_atomic() => {
                            self.env_sub_ax
                                .entry(l.clone())
                                .or_default()
                                .push((r.clone(), ax.clone()));
                        }
                        (l, Concept::Existential(role, b)) if l.is_atomic() => {
                            self.env_ex_rhs_ax.entry(l.clone()).or_default().push((
                                role.clone(),
                                (**b).clone(),
                                ax.clone(),
                            ));
                        }
                        (Concept::Existential(role, a), r) if r.is_atomic() => {
                            self.env_ex_lhs_ax
                                .entry((role.clone(), (**a).clone()))
                                .or_default()
                                .push((r.clone(), ax.clone()));
                        }
                        (Concept::Conjunction(ops), r) if r.is_atomic() => {
                            self.env_conj_ax.entry(ops[0].clone()).or_default().push((
                                0,
                                ops[1].clone(),
                                r.clone(),
                                ax.clone(),
                            ));
                            self.env_conj_ax.entry(ops[1].clone()).or_default().push((
                                1,
                                ops[0].clone(),
                                r.clone(),
                                ax.clone(),
                            ));
                        }
                        _ => {}
                    },
                    Calculus::Textbook => {}
                },
                Axiom::RoleInclusion(r, s) => {
                    if calculus == Calculus::Envelope {
                        self.env_role_sub_ax
                            .entry(r.clone())
                            .or_default()
                            .push((s.clone(), ax.clone()));
                    }
                }
                Axiom::RoleChainInclusion(chain, s) => {
                    self.chain_ax
                        .push((chain[0].clone(), chain[1].clone(), s.clone(), ax.clone()));
                }
                _ => {}
            }
        }
        if calculus == Calculus::Elk {
            for (name, canon) in self.alias_canon.clone() {
                if !self.is_negative_alias(&name) {
                    continue;
                }
                match &canon {
                    Concept::Conjunction(ops) => {
                        let k0 = self.shallow_key(&ops[0]);
                        let k1 = self.shallow_key(&ops[1]);
                        self.neg_conj
                            .entry(k0.clone())
                            .or_default()
                            .push((k1.clone(), 0, canon.clone()));
                        self.neg_conj
                            .entry(k1)
                            .or_default()
                            .push((k0, 1, canon.clone()));
                    }
                    Concept::Existential(role, filler) => {
                        let key = self.shallow_key(filler);
                        self.neg_ex
                            .entry(key)
                            .or_default()
                            .push((role.clone(), canon.clone()));
                    }
                    _ => {}
                }
            }
        }
    }

    fn is_negative_alias(&self, name: &str) -> bool {
        match self.nt.expand_concept(&Concept::named(name)) {
            Ok(full) => self.nt.negative_concepts().contains(&full),
            Err(_) => false,
        }
    }

    /// An atom's join key: aliases map to their canonical shallow image,
    /// everything else to itself.
    fn shallow_key(&self, atom: &Concept) -> Concept {
        if let Concept::Named(n) = atom {
            if let Some(canon) = self.alias_canon.get(n) {
                return canon.clone();
            }
        }
        atom.clone()
    }

    /// elk conclusion with a possibly-alias right-hand atom: aliases are
    /// stored expanded to their shallow image.
    fn mk_sub(&self, lhs: Concept, rhs_atom: Concept) -> Fact {
        let key = self.shallow_key(&rhs_atom);
        Self::fact_from_key(lhs, key)
    }

    fn fact_from_key(lhs: Concept, key: Concept) -> Fact {
        if key.is_atomic() {
            Fact::SubClass(lhs, key)
        } else {
            Fact::SubClassComplex(lhs, key)
        }
    }

    fn hier_contains(&self, r: &str, s: &str) -> bool {
        self.nt
            .role_hierarchy()
            .contains(&(r.to_string(), s.to_string()))
    }

    fn add(&mut self, fact: Fact, d: Derivation) -> Result<(), SaturationError> {
        let (id, new) = self.graph.insert_fact(fact);
        if new {
            if self.graph.len() > self.max_facts {
                return Err(SaturationError::ResourceLimit(self.max_facts));
            }
            self.index_fact(id);
        }
        self.graph.add_derivation(id, d);
        Ok(())
    }

    fn index_fact(&mut self, id: FactId) {
        match self.graph.fact(id).clone() {
            Fact::SubClass(l, r) | Fact::SubClassComplex(l, r) => {
                self.sub_by_lhs
                    .entry(l.clone())
                    .or_default()
                    .push((id, r.clone()));
                self.sub_by_rhs
                    .entry(r.clone())
                    .or_default()
                    .push((id, l.clone()));
                if let Concept::Existential(role, filler) = &r {
                    self.ex_rhs_by_filler
                        .entry((**filler).clone())
                        .or_default()
                        .push((id, l.clone(), role.clone()));
                }
                if let Concept::Existential(role, filler) = &l {
                    self.ex_lhs_by_filler
                        .entry((**filler).clone())
                        .or_default()
                        .push((id, role.clone(), r.clone()));
                }
                if let Concept::Conjunction(ops) = &l {
                    for (pos, op) in ops.iter().enumerate() {
                        let other = ops[1 - pos].clone();
                        self.conj_lhs_by_operand
                            .entry(op.clone())
                            .or_default()
                            .push((id, pos, other, r.clone()));
                    }
                }
            }
            Fact::Link(src, role, dst) => {
                self.links_by_src
                    .entry(src.clone())
                    .or_default()
                    .push((id, role.clone(), dst.clone()));
                self.links_by_dst
                    .entry(dst)
                    .or_default()
                    .push((id, src, role));
            }
            Fact::Init(_) => {}
        }
    }

    fn seed(&mut self) -> Result<(), SaturationError> {
        let seed = |rule: &'static str| Derivation::new(rule, vec![], vec![]);
        match self.nt.calculus {
            Calculus::Elk => {
                let names: Vec<String> = match &self.goal_directed {
                    Some(name) => vec![name.clone()],
                    None => self.nt.main_concepts().iter().cloned().collect(),
                };
                for n in names {
                    self.add(Fact::Init(Concept::Named(n)), seed("seed"))?;
                }
            }
            Calculus::Textbook => {
                for ax in self.nt.norm_axioms().to_vec() {
                    if let Axiom::ConceptInclusion(l, r) = &ax {
                        let fact = Fact::sub(l.clone(), r.clone());
                        self.add(fact, Derivation::new("tbox", vec![], vec![ax.clone()]))?;
                    }
                }
                for a in self.seed_atoms() {
                    self.add(Fact::sub(a.clone(), a.clone()), seed("CR1"))?;
                }
                for a in self.seed_atoms() {
                    self.add(Fact::sub(a, Concept::Top), seed("CR2"))?;
                }
            }
            Calculus::Envelope => {
                for a in self.seed_atoms() {
                    self.add(Fact::sub(a.clone(), a.clone()), seed("seed"))?;
                }
                for a in self.seed_atoms() {
                    self.add(Fact::sub(a, Concept::Top), seed("seed"))?;
                }
            }
        }
        Ok(())
    }

    /// ⊤, ⊥ and every concept name including aliases, in name order.
    fn seed_atoms(&self) -> Vec<Concept> {
        let mut names: BTreeSet<&String> = self.nt.main_concepts().iter().collect();
        names.extend(self.nt.alias_concepts().keys());
        let mut atoms = vec![Concept::Top, Concept::Bottom];
        atoms.extend(names.into_iter().map(|n| Concept::Named(n.clone())));
        atoms
    }

    fn run(&mut self) -> Result<(), SaturationError> {
        let n_rules = match self.nt.calculus {
            Calculus::Elk => 10,
            Calculus::Textbook => 4,
            Calculus::Envelope => 7,
        };
        let mut delta_start = 0;
        loop {
            let delta_end = self.graph.len();
            if delta_start == delta_end {
                return Ok(());
            }
            let mut out: Out = Vec::new();
            for rule in 0..n_rules {
                for id in delta_start..delta_end {
                    match self.nt.calculus {
                        Calculus::Elk => self.apply_elk(rule, id, &mut out),
                        Calculus::Textbook => self.apply_textbook(rule, id, &mut out),
                        Calculus::Envelope => self.apply_envelope(rule, id, &mut out),
                    }
                }
            }
            delta_start = delta_end;
            for (fact, d) in out {
                self.add(fact, d)?;
            }
        }
    }

    fn apply_elk(&self, rule: usize, id: FactId, out: &mut Out) {
        let fact = self.graph.fact(id);
        match rule {
            // R₀: init(C) → C ⊑ C
            0 => {
                if let Fact::Init(c) = fact {
                    out.push((
                        self.mk_sub(c.clone(), c.clone()),
                        Derivation::new("R0", vec![id], vec![]),
                    ));
                }
            }
            // R⊤: init(C) → C ⊑ ⊤, if ⊤ occurs negatively
            1 => {
                if let Fact::Init(c) = fact {
                    if self.top_negative {
                        out.push((
                            Fact::sub(c.clone(), Concept::Top),
                            Derivation::new("R_top", vec![id], vec![]),
                        ));
                    }
                }
            }
            // R⊑: C ⊑ D, D ⊑ E ∈ T → C ⊑ E
            2 => {
                if let Some((l, r)) = fact.as_sub() {
                    if let Some(axs) = self.elk_sub_ax.get(r) {
                        for (e, ax) in axs {
                            out.push((
                                self.mk_sub(l.clone(), e.clone()),
                                Derivation::new("R_sub", vec![id], vec![ax.clone()]),
                            ));
                        }
                    }
                }
            }
            // R⊓⁻: C ⊑ D₁⊓D₂ → C ⊑ D₁, C ⊑ D₂
            3 => {
                if let Fact::SubClassComplex(l, Concept::Conjunction(ops)) = fact {
                    for op in ops {
                        out.push((
                            self.mk_sub(l.clone(), op.clone()),
                            Derivation::new("R_and_minus", vec![id], vec![]),
                        ));
                    }
                }
            }
            // R⊓⁺: C ⊑ D₁, C ⊑ D₂ → C ⊑ D₁⊓D₂, if D₁⊓D₂ occurs negatively
            4 => {
                if let Some((l, r)) = fact.as_sub() {
                    if let Some(entries) = self.neg_conj.get(r) {
                        for (partner_key, pos, concl) in entries {
                            let pf = Self::fact_from_key(l.clone(), partner_key.clone());
                            if let Some(pid) = self.graph.id_of(&pf) {
                                let premises =
                                    if *pos == 0 { vec![id, pid] } else { vec![pid, id] };
                                out.push((
                                    Fact::SubClassComplex(l.clone(), concl.clone()),
                                    Derivation::new("R_and_plus", premises, vec![]),
                                ));
                            }
                        }
                    }
                }
            }
            // R∃⁻: C ⊑ ∃r.E → C →r E
            5 => {
                if let Fact::SubClassComplex(l, Concept::Existential(role, filler)) = fact {
                    out.push((
                        Fact::Link(l.clone(), role.clone(), (**filler).clone()),
                        Derivation::new("R_ex_minus", vec![id], vec![]),
                    ));
                }
            }
            // R∃⁺: C →r D, D ⊑ E, r ⊑* s → C ⊑ ∃s.E, if ∃s.E occurs negatively
            6 => {
                if let Fact::Link(c, r, d) = fact {
                    if let Some(subs) = self.sub_by_lhs.get(d) {
                        for (sid, rhs) in subs {
                            self.elk_ex_plus(id, c, r, *sid, rhs, out);
                        }
                    }
                }
                if let Some((l, r)) = fact.as_sub() {
                    if let Some(links) = self.links_by_dst.get(l) {
                        for (lid, src, role) in links {
                            self.elk_ex_plus(*lid, src, role, id, r, out);
                        }
                    }
                }
            }
            // R⤳: C →r E → init(E)
            7 => {
                if let Fact::Link(_, _, e) = fact {
                    out.push((
                        Fact::Init(e.clone()),
                        Derivation::new("R_reach", vec![id], vec![]),
                    ));
                }
            }
            // R⊥: C →r E, E ⊑ ⊥ → C ⊑ ⊥
            8 => {
                if let Fact::Link(c, _, e) = fact {
                    if let Some(bid) =
                        self.graph.id_of(&Fact::SubClass(e.clone(), Concept::Bottom))
                    {
                        out.push((
                            Fact::sub(c.clone(), Concept::Bottom),
                            Derivation::new("R_bot", vec![id, bid], vec![]),
                        ));
                    }
                }
                if let Fact::SubClass(e, Concept::Bottom) = fact {
                    if let Some(links) = self.links_by_dst.get(e) {
                        for (lid, src, _) in links {
                            out.push((
                                Fact::sub(src.clone(), Concept::Bottom),
                                Derivation::new("R_bot", vec![*lid, id], vec![]),
                            ));
                        }
                    }
                }
            }
            // R∘: C →r₁ D, D →r₂ E, r₁ ⊑* s₁, r₂ ⊑* s₂, s₁∘s₂ ⊑ s ∈ T → C →s E
            9 => {
                if let Fact::Link(c, r1, d) = fact {
                    if let Some(rights) = self.links_by_src.get(d) {
                        for (rid, r2, e) in rights {
                            self.elk_circ(id, c, r1, *rid, r2, e, out);
                        }
                    }
                    if let Some(lefts) = self.links_by_dst.get(c) {
                        for (lid, src, r0) in lefts {
                            self.elk_circ(*lid, src, r0, id, r1, d, out);
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    fn elk_ex_plus(
        &self,
        link_id: FactId,
        c: &Concept,
        r: &str,
        sub_id: FactId,
        rhs_key: &Concept,
        out: &mut Out,
    ) {
        if let Some(entries) = self.neg_ex.get(rhs_key) {
            for (s, concl) in entries {
                if self.hier_contains(r, s) {
                    out.push((
                        Fact::SubClassComplex(c.clone(), concl.clone()),
                        Derivation::new(
                            "R_ex_plus",
                            vec![link_id, sub_id],
                            vec![Axiom::RoleInclusion(r.to_string(), s.clone())],
                        ),
                    ));
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn elk_circ(
        &self,
        left: FactId,
        c: &Concept,
        r1: &str,
        right: FactId,
        r2: &str,
        e: &Concept,
        out: &mut Out,
    ) {
        for (s1, s2, s, ax) in &self.chain_ax {
            if self.hier_contains(r1, s1) && self.hier_contains(r2, s2) {
                out.push((
                    Fact::Link(c.clone(), s.clone(), e.clone()),
                    Derivation::new(
                        "R_circ",
                        vec![left, right],
                        vec![
                            Axiom::RoleInclusion(r1.to_string(), s1.clone()),
                            Axiom::RoleInclusion(r2.to_string(), s2.clone()),
                            ax.clone(),
                        ],
                    ),
                ));
            }
        }
    }

    fn apply_textbook(&self, rule: usize, id: FactId, out: &mut Out) {
        let fact = self.graph.fact(id);
        let both_complex = |a: &Concept, b: &Concept| !a.is_atomic() && !b.is_atomic();
        match rule {
            // CR3: ⊢ C ⊑ D, ⊢ D ⊑ E → ⊢ C ⊑ E
            0 => {
                if let Some((l, r)) = fact.as_sub() {
                    if let Some(nexts) = self.sub_by_lhs.get(r) {
                        for (nid, e) in nexts {
                            if !both_complex(l, e) {
                                out.push((
                                    Fact::sub(l.clone(), e.clone()),
                                    Derivation::new("CR3", vec![id, *nid], vec![]),
                                ));
                            }
                        }
                    }
                    if let Some(prevs) = self.sub_by_rhs.get(l) {
                        for (pid, c) in prevs {
                            if !both_complex(c, r) {
                                out.push((
                                    Fact::sub(c.clone(), r.clone()),
                                    Derivation::new("CR3", vec![*pid, id], vec![]),
                                ));
                            }
                        }
                    }
                }
            }
            // CR4: ⊢ C ⊑ D₁, ⊢ C ⊑ D₂, ⊢ D₁⊓D₂ ⊑ E → ⊢ C ⊑ E
            1 => {
                if let Some((c, d)) = fact.as_sub() {
                    if d.is_atomic() {
                        if let Some(entries) = self.conj_lhs_by_operand.get(d) {
                            for (f3, pos, other, e) in entries {
                                let pf = Fact::sub(c.clone(), other.clone());
                                if let Some(pid) = self.graph.id_of(&pf) {
                                    let premises = if *pos == 0 {
                                        vec![id, pid, *f3]
                                    } else {
                                        vec![pid, id, *f3]
                                    };
                                    out.push((
                                        Fact::sub(c.clone(), e.clone()),
                                        Derivation::new("CR4", premises, vec![]),
                                    ));
                                }
                            }
                        }
                    }
                }
                if let Fact::SubClassComplex(Concept::Conjunction(ops), e) = fact {
                    if let Some(firsts) = self.sub_by_rhs.get(&ops[0]) {
                        for (f1, c) in firsts {
                            let pf = Fact::sub(c.clone(), ops[1].clone());
                            if let Some(pid) = self.graph.id_of(&pf) {
                                out.push((
                                    Fact::sub(c.clone(), e.clone()),
                                    Derivation::new("CR4", vec![*f1, pid, id], vec![]),
                                ));
                            }
                        }
                    }
                }
            }
            // CR5′: ⊢ C ⊑ ∃r.D₁, ⊢ D₁ ⊑ D₂, ⊢ ∃s.D₂ ⊑ E, r ⊑* s → ⊢ C ⊑ E
            2 => {
                if let Fact::SubClassComplex(c, Concept::Existential(r, d1)) = fact {
                    if let Some(mids) = self.sub_by_lhs.get(&**d1) {
                        for (mid, d2) in mids {
                            if d2.is_atomic() {
                                self.tb_cr5(id, c, r, *mid, d2, out);
                            }
                        }
                    }
                }
                if let Fact::SubClass(d1, d2) = fact {
                    if let Some(firsts) = self.ex_rhs_by_filler.get(d1) {
                        for (f1, c, r) in firsts {
                            self.tb_cr5(*f1, c, r, id, d2, out);
                        }
                    }
                }
                if let Fact::SubClassComplex(Concept::Existential(s, d2), e) = fact {
                    if let Some(mids) = self.sub_by_rhs.get(&**d2) {
                        for (mid, d1) in mids {
                            if !d1.is_atomic() {
                                continue;
                            }
                            if let Some(firsts) = self.ex_rhs_by_filler.get(d1) {
                                for (f1, c, r) in firsts {
                                    if self.hier_contains(r, s) {
                                        out.push((
                                            Fact::sub(c.clone(), e.clone()),
                                            Derivation::new(
                                                "CR5p",
                                                vec![*f1, *mid, id],
                                                vec![Axiom::RoleInclusion(r.clone(), s.clone())],
                                            ),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            // R⊥′: ⊢ C ⊑ ∃r.E, ⊢ E ⊑ ⊥ → ⊢ C ⊑ ⊥
            3 => {
                if let Fact::SubClassComplex(c, Concept::Existential(_, e)) = fact {
                    if let Some(bid) =
                        self.graph.id_of(&Fact::SubClass((**e).clone(), Concept::Bottom))
                    {
                        out.push((
                            Fact::sub(c.clone(), Concept::Bottom),
                            Derivation::new("R_bot_p", vec![id, bid], vec![]),
                        ));
                    }
                }
                if let Fact::SubClass(e, Concept::Bottom) = fact {
                    if let Some(firsts) = self.ex_rhs_by_filler.get(e) {
                        for (f1, c, _) in firsts {
                            out.push((
                                Fact::sub(c.clone(), Concept::Bottom),
                                Derivation::new("R_bot_p", vec![*f1, id], vec![]),
                            ));
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    fn tb_cr5(
        &self,
        f1: FactId,
        c: &Concept,
        r: &str,
        mid: FactId,
        d2: &Concept,
        out: &mut Out,
    ) {
        if let Some(thirds) = self.ex_lhs_by_filler.get(d2) {
            for (f3, s, e) in thirds {
                if self.hier_contains(r, s) {
                    out.push((
                        Fact::sub(c.clone(), e.clone()),
                        Derivation::new(
                            "CR5p",
                            vec![f1, mid, *f3],
                            vec![Axiom::RoleInclusion(r.to_string(), s.clone())],
                        ),
                    ));
                }
            }
        }
    }

    fn apply_envelope(&self, rule: usize, id: FactId, out: &mut Out) {
        let fact = self.graph.fact(id);
        match rule {
            // CR1: C ⊑ D, D ⊑ E ∈ T → C ⊑ E
            0 => {
                if let Fact::SubClass(c, d) = fact {
                    if let Some(axs) = self.env_sub_ax.get(d) {
                        for (e, ax) in axs {
                            out.push((
                                Fact::sub(c.clone(), e.clone()),
                                Derivation::new("CR1", vec![id], vec![ax.clone()]),
                            ));
                        }
                    }
                }
            }
            // CR2: C ⊑ D₁, C ⊑ D₂, D₁⊓D₂ ⊑ E ∈ T → C ⊑ E
            1 => {
                if let Fact::SubClass(c, d) = fact {
                    if let Some(entries) = self.env_conj_ax.get(d) {
                        for (pos, partner, e, ax) in entries {
                            let pf = Fact::sub(c.clone(), partner.clone());
                            if let Some(pid) = self.graph.id_of(&pf) {
                                let premises =
                                    if *pos == 0 { vec![id, pid] } else { vec![pid, id] };
                                out.push((
                                    Fact::sub(c.clone(), e.clone()),
                                    Derivation::new("CR2", premises, vec![ax.clone()]),
                                ));
                            }
                        }
                    }
                }
            }
            // CR3: C ⊑ D, D ⊑ ∃r.E ∈ T → C ⊑ ∃r.E
            2 => {
                if let Fact::SubClass(c, d) = fact {
                    if let Some(axs) = self.env_ex_rhs_ax.get(d) {
                        for (r, b, ax) in axs {
                            out.push((
                                Fact::sub(c.clone(), Concept::some(r, b.clone())),
                                Derivation::new("CR3", vec![id], vec![ax.clone()]),
                            ));
                        }
                    }
                }
            }
            // CR4: C ⊑ ∃r.D₁, D₁ ⊑ D₂, ∃r.D₂ ⊑ E ∈ T → C ⊑ E
            3 => {
                if let Fact::SubClassComplex(c, Concept::Existential(r, d1)) = fact {
                    if let Some(mids) = self.sub_by_lhs.get(&**d1) {
                        for (mid, d2) in mids {
                            if !d2.is_atomic() {
                                continue;
                            }
                            if let Some(axs) = self.env_ex_lhs_ax.get(&(r.clone(), d2.clone())) {
                                for (e, ax) in axs {
                                    out.push((
                                        Fact::sub(c.clone(), e.clone()),
                                        Derivation::new("CR4", vec![id, *mid], vec![ax.clone()]),
                                    ));
                                }
                            }
                        }
                    }
                }
                if let Fact::SubClass(d1, d2) = fact {
                    if let Some(firsts) = self.ex_rhs_by_filler.get(d1) {
                        for (f1, c, r) in firsts {
                            if let Some(axs) = self.env_ex_lhs_ax.get(&(r.clone(), d2.clone())) {
                                for (e, ax) in axs {
                                    out.push((
                                        Fact::sub(c.clone(), e.clone()),
                                        Derivation::new("CR4", vec![*f1, id], vec![ax.clone()]),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            // CR5: C ⊑ ∃r.D, D ⊑ ⊥ → C ⊑ ⊥
            4 => {
                if let Fact::SubClassComplex(c, Concept::Existential(_, d)) = fact {
                    if let Some(bid) =
                        self.graph.id_of(&Fact::SubClass((**d).clone(), Concept::Bottom))
                    {
                        out.push((
                            Fact::sub(c.clone(), Concept::Bottom),
                            Derivation::new("CR5", vec![id, bid], vec![]),
                        ));
                    }
                }
                if let Fact::SubClass(d, Concept::Bottom) = fact {
                    if let Some(firsts) = self.ex_rhs_by_filler.get(d) {
                        for (f1, c, _) in firsts {
                            out.push((
                                Fact::sub(c.clone(), Concept::Bottom),
                                Derivation::new("CR5", vec![*f1, id], vec![]),
                            ));
                        }
                    }
                }
            }
            // CR10: C ⊑ ∃r.E, r ⊑ s ∈ T → C ⊑ ∃s.E
            5 => {
                if let Fact::SubClassComplex(c, Concept::Existential(r, e)) = fact {
                    if let Some(sups) = self.env_role_sub_ax.get(r) {
                        for (s, ax) in sups {
                            out.push((
                                Fact::sub(c.clone(), Concept::Existential(s.clone(), e.clone())),
                                Derivation::new("CR10", vec![id], vec![ax.clone()]),
                            ));
                        }
                    }
                }
            }
            // CR11: C ⊑ ∃r₁.D, D ⊑ ∃r₂.E, r₁∘r₂ ⊑ s ∈ T → C ⊑ ∃s.E
            6 => {
                if let Fact::SubClassComplex(c, Concept::Existential(r1, d)) = fact {
                    if let Some(seconds) = self.sub_by_lhs.get(&**d) {
                        for (f2, rhs) in seconds {
                            if let Concept::Existential(r2, e) = rhs {
                                self.env_cr11(id, c, r1, *f2, r2, e.as_ref(), out);
                            }
                        }
                    }
                }
                if let Fact::SubClassComplex(d, Concept::Existential(r2, e)) = fact {
                    if let Some(firsts) = self.ex_rhs_by_filler.get(d) {
                        for (f1, c, r1) in firsts {
                            self.env_cr11(*f1, c, r1, id, r2, e.as_ref(), out);
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn env_cr11(
        &self,
        f1: FactId,
        c: &Concept,
        r1: &str,
        f2: FactId,
        r2: &str,
        e: &Concept,
        out: &mut Out,
    ) {
        for (c1, c2, s, ax) in &self.chain_ax {
            if r1 == c1 && r2 == c2 {
                out.push((
                    Fact::sub(c.clone(), Concept::Existential(s.clone(), Box::new(e.clone()))),
                    Derivation::new("CR11", vec![f1, f2], vec![ax.clone()]),
                ));
            }
        }
    }
}
