//! Axiom evaluation on complete executions and a brute-force reads-from
//! consistency oracle.
//!
//! The oracle is the ground truth for differential testing: deliberately
//! exponential, built on the oracle-grade pair-set relations of exec-core
//! (never on the optimized hb-engine), and deterministic — per-location write
//! permutations are enumerated in lexicographic order of event ids and the
//! first passing mo is the witness.

use exec_core::relations::{self, HbMode, Relation, RelationBundle};
use exec_core::{EventId, ModificationOrder, PartialExecution};
use itertools::Itertools;
use std::collections::HashSet;

/// A consistency model: a named axiom set per the paper's "Axioms and Models"
/// figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// acy(po ∪ rf ∪ mo ∪ fr).
    Sc,
    /// strong-write-coherence ∧ read-coherence ∧ atomicity.
    Sra,
    /// write-coherence ∧ read-coherence ∧ atomicity.
    Ra,
    /// weak-read-coherence ∧ weak-atomicity ∧ PO-RF (mo-free).
    Wra,
    /// RA's axioms ∧ PO-RF, with the mode-aware hb.
    Rc20,
    /// RC20's axiom set with hb = po.
    Relaxed,
}

impl Model {
    pub fn axioms(self) -> &'static [Axiom] {
        use Axiom::*;
        match self {
            Model::Sc => &[ScAcyclicity],
            Model::Sra => &[StrongWriteCoherence, ReadCoherence, Atomicity],
            Model::Ra => &[WriteCoherence, ReadCoherence, Atomicity],
            Model::Wra => &[WeakReadCoherence, WeakAtomicity, PoRf],
            Model::Rc20 | Model::Relaxed => {
                &[WriteCoherence, ReadCoherence, Atomicity, PoRf]
            }
        }
    }

    /// True iff the model's axiom set never mentions mo: consistency needs no
    /// enumeration.
    pub fn is_mo_free(self) -> bool {
        matches!(self, Model::Wra)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Model::Sc => "sc",
            Model::Sra => "sra",
            Model::Ra => "ra",
            Model::Wra => "wra",
            Model::Rc20 => "rc20",
            Model::Relaxed => "relaxed",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sc" => Ok(Model::Sc),
            "sra" => Ok(Model::Sra),
            "ra" => Ok(Model::Ra),
            "wra" => Ok(Model::Wra),
            "rc20" => Ok(Model::Rc20),
            "relaxed" => Ok(Model::Relaxed),
            other => Err(format!("unknown model: {other}")),
        }
    }
}

/// One consistency axiom; the exact relational formulas of the paper's §2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// irr(mo; rf?; hb?).
    WriteCoherence,
    /// acy(hb ∪ mo).
    StrongWriteCoherence,
    /// irr(fr; rf?; hb).
    ReadCoherence,
    /// irr(hbloc; [W ∪ RMW]; hb; rf⁻¹).
    WeakReadCoherence,
    /// irr(fr; mo).
    Atomicity,
    /// no two RMWs share a writer.
    WeakAtomicity,
    /// acy(po ∪ rf).
    PoRf,
    /// acy(po ∪ rf ∪ mo ∪ fr).
    ScAcyclicity,
}

/// Outcome of evaluating one axiom: pass/fail plus, on failure, a witnessing
/// cycle or composition path (event ids) re-checkable against the relations.
#[derive(Debug, Clone)]
pub struct AxiomOutcome {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Vec<EventId>>,
}

/// Per-axiom outcomes for a model's axiom set.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub entries: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }
}

/// Enumeration guard: the product of per-location write-count factorials
/// exceeded the limit.
#[derive(Debug, thiserror::Error)]
#[error("mo enumeration too large: {candidates} candidates > limit {limit}")]
pub struct TooLarge {
    pub candidates: u128,
    pub limit: u128,
}

/// Default enumeration guard (total mo candidates).
pub const DEFAULT_ORACLE_LIMIT: u128 = 10_000_000;

/// The execution/hb convention a model evaluates under: WRA/SRA/RA (and SC)
/// live in the rel/acq fragment, so mixed-mode inputs are strengthened;
/// Relaxed forces hb = po; RC20 is mode-sensitive.
pub fn model_execution(x: &PartialExecution, m: Model) -> (PartialExecution, HbMode) {
    match m {
        Model::Sc | Model::Sra | Model::Ra | Model::Wra => {
            (exec_core::strengthen_modes(x), HbMode::ModeAware)
        }
        Model::Rc20 => (x.clone(), HbMode::ModeAware),
        Model::Relaxed => (x.clone(), HbMode::PoOnly),
    }
}

/// Evaluates one axiom with the mode-aware hb of `derive_relations` (the
/// paper's §2 reading of the input as written).
pub fn eval_axiom(x: &PartialExecution, mo: &ModificationOrder, axiom: Axiom) -> AxiomOutcome {
    let b = relations::derive_relations(x, mo);
    eval_axiom_with(x, mo, axiom, &b)
}

/// Evaluates one axiom under `m`'s fragment convention (strengthened /
/// po-only hb). This is what witness round-trips check against.
pub fn eval_axiom_for_model(
    x: &PartialExecution,
    mo: &ModificationOrder,
    axiom: Axiom,
    m: Model,
) -> AxiomOutcome {
    let (xe, hb_mode) = model_execution(x, m);
    let b = relations::derive_relations_with(&xe, mo, hb_mode);
    eval_axiom_with(&xe, mo, axiom, &b)
}

/// Evaluates every axiom of `m` under its fragment convention.
pub fn eval_model(x: &PartialExecution, mo: &ModificationOrder, m: Model) -> AxiomReport {
    let (xe, hb_mode) = model_execution(x, m);
    let b = relations::derive_relations_with(&xe, mo, hb_mode);
    AxiomReport {
        entries: m
            .axioms()
            .iter()
            .map(|&a| eval_axiom_with(&xe, mo, a, &b))
            .collect(),
    }
}

/// Core evaluator against a prebuilt relation bundle (hb is mo-independent,
/// so enumeration callers reuse it; only fr must match `mo`).
fn eval_axiom_with(
    x: &PartialExecution,
    mo: &ModificationOrder,
    axiom: Axiom,
    b: &RelationBundle,
) -> AxiomOutcome {
    let (holds, witness) = match axiom {
        Axiom::WriteCoherence => write_coherence(x, mo, &b.hb),
        Axiom::StrongWriteCoherence => {
            let mut rel = Relation::from_pairs(b.hb.iter());
            for (a, c) in mo.all_pairs() {
                rel.insert(a, c);
            }
            acyclic_with_witness(&rel)
        }
        Axiom::ReadCoherence => read_coherence(x, &b.fr, &b.hb),
        Axiom::WeakReadCoherence => weak_read_coherence(x, &b.hbloc, &b.hb),
        Axiom::Atomicity => atomicity(mo, &b.fr),
        Axiom::WeakAtomicity => match exec_core::find_weak_atomicity_violation(x) {
            None => (true, None),
            Some(v) => (false, Some(vec![v.writer, v.rmw1, v.rmw2])),
        },
        Axiom::PoRf => match relations::porf_topo_order(x) {
            Ok(_) => (true, None),
            Err(cycle) => (false, Some(cycle)),
        },
        Axiom::ScAcyclicity => {
            let mut rel = Relation::from_pairs(relations::po_immediate(x));
            for (&r, &w) in x.rf() {
                rel.insert(w, r);
            }
            for (a, c) in mo.all_pairs() {
                rel.insert(a, c);
            }
            for (a, c) in b.fr.iter() {
                rel.insert(a, c);
            }
            acyclic_with_witness(&rel)
        }
    };
    AxiomOutcome { axiom, holds, witness }
}

/// irr(mo; rf?; hb?): no mo pair (a, b) closes back to `a` via an optional rf
/// edge and optional hb.
fn write_coherence(
    x: &PartialExecution,
    mo: &ModificationOrder,
    hb: &Relation,
) -> (bool, Option<Vec<EventId>>) {
    for (a, bw) in mo.all_pairs() {
        if hb.contains(bw, a) {
            return (false, Some(vec![a, bw]));
        }
        for &r in x.readers_of(bw) {
            if r == a || hb.contains(r, a) {
                return (false, Some(vec![a, bw, r]));
            }
        }
    }
    (true, None)
}

/// irr(fr; rf?; hb): no reader fr-reaches a write that happens-before it
/// (directly or through one of the write's readers).
fn read_coherence(
    x: &PartialExecution,
    fr: &Relation,
    hb: &Relation,
) -> (bool, Option<Vec<EventId>>) {
    for (r, w2) in fr.iter() {
        if hb.contains(w2, r) {
            return (false, Some(vec![r, w2]));
        }
        for &c in x.readers_of(w2) {
            if hb.contains(c, r) {
                return (false, Some(vec![r, w2, c]));
            }
        }
    }
    (true, None)
}

/// irr(hbloc; [W ∪ RMW]; hb; rf⁻¹): no write w′ is hb-sandwiched between a
/// reader's writer (same location, hbloc) and the reader.
fn weak_read_coherence(
    x: &PartialExecution,
    hbloc: &Relation,
    hb: &Relation,
) -> (bool, Option<Vec<EventId>>) {
    for r in x.events().filter(|e| e.op.is_read_like()) {
        let w = x.writer_of(r.id).expect("reader has writer");
        for w2 in x.events().filter(|e| e.op.is_write_like()) {
            if hbloc.contains(w, w2.id) && hb.contains(w2.id, r.id) {
                return (false, Some(vec![w, w2.id, r.id]));
            }
        }
    }
    (true, None)
}

/// irr(fr; mo).
fn atomicity(mo: &ModificationOrder, fr: &Relation) -> (bool, Option<Vec<EventId>>) {
    let mo_pairs: HashSet<(EventId, EventId)> = mo.all_pairs().into_iter().collect();
    for (r, w2) in fr.iter() {
        if mo_pairs.contains(&(w2, r)) {
            return (false, Some(vec![r, w2]));
        }
    }
    (true, None)
}

fn acyclic_with_witness(rel: &Relation) -> (bool, Option<Vec<EventId>>) {
    let closed = rel.closure();
    for (a, b) in closed.iter() {
        if a == b {
            // Reconstruct a short cycle through `a` greedily.
            return (false, Some(cycle_through(rel, a)));
        }
    }
    (true, None)
}

fn cycle_through(rel: &Relation, start: EventId) -> Vec<EventId> {
    // BFS back to `start` over the literal edges.
    use std::collections::{HashMap, VecDeque};
    let mut succ: HashMap<EventId, Vec<EventId>> = HashMap::new();
    for (a, b) in rel.iter() {
        succ.entry(a).or_default().push(b);
    }
    let mut prev: HashMap<EventId, EventId> = HashMap::new();
    let mut q = VecDeque::from([start]);
    while let Some(v) = q.pop_front() {
        for &w in succ.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if w == start {
                let mut path = vec![v];
                let mut cur = v;
                while cur != start {
                    cur = prev[&cur];
                    path.push(cur);
                }
                path.reverse();
                return path;
            }
            if !prev.contains_key(&w) && w != start {
                prev.insert(w, v);
                q.push_back(w);
            }
        }
    }
    vec![start]
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Number of total-mo candidates (product of per-location write-count
/// factorials).
pub fn candidate_count(x: &PartialExecution) -> u128 {
    (0..x.num_locs())
        .map(|l| factorial(x.writes_on(l).len()))
        .product()
}

/// Brute-force consistency: `Ok(Some(mo))` with the first passing mo in
/// enumeration order, `Ok(None)` if no total mo passes, `Err` if the guard
/// trips. WRA skips enumeration (its axioms never mention mo) and returns an
/// empty total mo as its trivial witness.
pub fn oracle_consistent(
    x: &PartialExecution,
    m: Model,
    limit: u128,
) -> Result<Option<ModificationOrder>, TooLarge> {
    if m.is_mo_free() {
        let empty = ModificationOrder::empty_total();
        return Ok(eval_model(x, &empty, m).all_hold().then_some(empty));
    }
    let mut found = None;
    for_each_mo(x, m, limit, |mo, report| {
        if report.all_hold() {
            found = Some(mo.clone());
            true // stop
        } else {
            false
        }
    })?;
    Ok(found)
}

/// Intersection of *all* witnessing total mos, as ordered pairs: `Ok(None)`
/// if the execution is inconsistent under `m`; for the mo-free WRA the
/// intersection is empty by convention.
pub fn oracle_witness_intersection(
    x: &PartialExecution,
    m: Model,
    limit: u128,
) -> Result<Option<HashSet<(EventId, EventId)>>, TooLarge> {
    if m.is_mo_free() {
        let empty = ModificationOrder::empty_total();
        return Ok(eval_model(x, &empty, m).all_hold().then(HashSet::new));
    }
    let mut acc: Option<HashSet<(EventId, EventId)>> = None;
    for_each_mo(x, m, limit, |mo, report| {
        if report.all_hold() {
            let pairs: HashSet<(EventId, EventId)> = mo.all_pairs().into_iter().collect();
            acc = Some(match acc.take() {
                None => pairs,
                Some(prev) => prev.intersection(&pairs).copied().collect(),
            });
        }
        false // never stop early: every witness participates
    })?;
    Ok(acc)
}

/// Shared enumeration driver: guards, builds the model's relation bundle once
/// (hb is mo-independent), then visits every total mo in deterministic order.
/// The visitor returns `true` to stop early.
fn for_each_mo(
    x: &PartialExecution,
    m: Model,
    limit: u128,
    mut visit: impl FnMut(&ModificationOrder, &AxiomReport) -> bool,
) -> Result<(), TooLarge> {
    let candidates = candidate_count(x);
    if candidates > limit {
        return Err(TooLarge { candidates, limit });
    }
    let (xe, hb_mode) = model_execution(x, m);
    // hb/hbloc/sw are mo-independent; fr is recomputed per candidate.
    let base = relations::derive_relations_with(&xe, &ModificationOrder::empty_total(), hb_mode);
    let axioms = m.axioms();

    let locs: Vec<usize> = (0..xe.num_locs()).collect();
    let perms_per_loc: Vec<Vec<Vec<EventId>>> = locs
        .iter()
        .map(|&l| {
            let writes = xe.writes_on(l).to_vec(); // sorted by id
            let n = writes.len();
            writes.into_iter().permutations(n).collect()
        })
        .collect();

    let mut eval = |mo: &ModificationOrder| -> AxiomReport {
        let fr = relations::compute_fr(&xe, mo);
        let b = RelationBundle {
            sw: base.sw.clone(),
            hb: base.hb.clone(),
            hbloc: base.hbloc.clone(),
            fr,
        };
        AxiomReport {
            entries: axioms.iter().map(|&a| eval_axiom_with(&xe, mo, a, &b)).collect(),
        }
    };

    if perms_per_loc.is_empty() {
        let mo = ModificationOrder::empty_total();
        let report = eval(&mo);
        visit(&mo, &report);
        return Ok(());
    }
    for combo in perms_per_loc.into_iter().multi_cartesian_product() {
        let mut mo = ModificationOrder::empty_total();
        for (l, seq) in locs.iter().zip(combo) {
            mo.set_sequence(*l, seq);
        }
        let report = eval(&mo);
        if visit(&mo, &report) {
            return Ok(());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
