//! §5.6 minimal-coherence predicates: do a partial m̄o's pairs already force
//! every coherence obligation of the model? These are the preconditions of
//! witness completion and are phrased exactly as the per-model conditions.

use exec_core::{EventId, ModificationOrder, PartialExecution, RfChainIndex};
use hb_engine::HbTimestampTable;
use std::collections::{HashMap, HashSet, VecDeque};

/// Reachability helper over an explicit adjacency map.
fn reaches(succ: &HashMap<EventId, Vec<EventId>>, from: EventId, to: EventId) -> bool {
    if from == to {
        return true;
    }
    let mut seen = HashSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(a) = queue.pop_front() {
        for &b in succ.get(&a).into_iter().flatten() {
            if b == to {
                return true;
            }
            if seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    false
}

fn add(succ: &mut HashMap<EventId, Vec<EventId>>, a: EventId, b: EventId) {
    succ.entry(a).or_default().push(b);
}

/// SRA minimal coherence: (1) every triplet `(w, r, w′)` with `(w′, r) ∈ hb`
/// has `(w′, w) ∈ (hb ∪ m̄o)⁺`, and (2) `hb ∪ m̄o` is acyclic. Operates on the
/// mode-strengthened execution, matching [`crate::check_sra_normw`].
pub fn sra_minimally_coherent(x: &PartialExecution, pm: &ModificationOrder) -> bool {
    let xs = exec_core::strengthen_modes(x);
    let Ok(_) = exec_core::relations::porf_topo_order(&xs) else { return false };
    let hb = hb_engine::compute_hb(&xs).expect("porf acyclicity checked");
    let mut succ: HashMap<EventId, Vec<EventId>> = HashMap::new();
    for (a, b) in exec_core::relations::po_immediate(&xs) {
        add(&mut succ, a, b);
    }
    for (&r, &w) in xs.rf() {
        add(&mut succ, w, r);
    }
    for (a, b) in pm.all_pairs() {
        add(&mut succ, a, b);
    }
    // (2) acyclicity.
    if has_cycle(&succ, xs.events().map(|e| e.id)) {
        return false;
    }
    // (1) obligations.
    for t in exec_core::triplets(&xs) {
        let w2_ev = xs.event(t.w2);
        let r_ev = xs.event(t.r);
        if hb.hb_before(w2_ev, r_ev) && !reaches(&succ, t.w2, t.w) {
            return false;
        }
    }
    true
}

/// RC20 minimal coherence: per location, (1) every triplet `(w, r, w′)` with
/// `(w′, r) ∈ rf?;hb` and `(w′, w) ∉ rf⁺` has `(w′, tc(w))` in
/// `(rf_x ∪ hb_x ∪ m̄o_x)⁺`, (2) every m̄o pair not already an rf-chain step
/// is lifted to a chain top, and (3) the per-location graph is acyclic.
pub fn rc20_minimally_coherent(x: &PartialExecution, pm: &ModificationOrder) -> bool {
    let Ok(_) = exec_core::relations::porf_topo_order(x) else { return false };
    let hb = hb_engine::compute_hb(x).expect("porf acyclicity checked");
    minimally_coherent_hb(x, pm, |a, b| hb.hb_before(x.event(a), x.event(b)))
}

/// Relaxed minimal coherence: the RC20 conditions with hb replaced by po.
pub fn relaxed_minimally_coherent(x: &PartialExecution, pm: &ModificationOrder) -> bool {
    let Ok(_) = exec_core::relations::porf_topo_order(x) else { return false };
    minimally_coherent_hb(x, pm, |a, b| {
        let (ea, eb) = (x.event(a), x.event(b));
        ea.tid == eb.tid && ea.idx < eb.idx
    })
}

fn minimally_coherent_hb(
    x: &PartialExecution,
    pm: &ModificationOrder,
    hb_before: impl Fn(EventId, EventId) -> bool,
) -> bool {
    let Ok(chains) = exec_core::build_rf_chains(x) else { return false };
    let all_triplets = exec_core::triplets(x);
    for loc in 0..x.num_locs() {
        // Location graph: rf_x ∪ hb_x ∪ m̄o_x over the location's accesses.
        // RMWs appear in both lists; dedupe so Kahn's node count is exact.
        let mut ids: Vec<EventId> = x.writes_on(loc).to_vec();
        ids.extend(x.reads_on(loc).iter().filter(|r| !x.event(**r).op.is_write_like()));
        let mut succ: HashMap<EventId, Vec<EventId>> = HashMap::new();
        for &a in &ids {
            for &b in &ids {
                if a != b && hb_before(a, b) {
                    add(&mut succ, a, b);
                }
            }
        }
        for &r in x.reads_on(loc) {
            add(&mut succ, x.writer_of(r).expect("reader has writer"), r);
        }
        let pairs = pm.pairs_on(loc);
        for &(a, b) in &pairs {
            add(&mut succ, a, b);
        }
        // (3) acyclicity.
        if has_cycle(&succ, ids.iter().copied()) {
            return false;
        }
        // (2) m̄o pairs off-chain must target chain tops.
        for &(a, b) in &pairs {
            if !rf_chain_before(&chains, a, b) && chains.tc(b) != b && !pairs.contains(&(a, chains.tc(b))) {
                return false;
            }
        }
        // (1) triplet obligations.
        for t in all_triplets.iter().filter(|t| x.event(t.r).loc == Some(loc)) {
            if rf_chain_before(&chains, t.w2, t.w) {
                continue;
            }
            if !rf_hb_before(x, &hb_before, t.w2, t.r) {
                continue;
            }
            if !reaches(&succ, t.w2, chains.tc(t.w)) {
                return false;
            }
        }
    }
    true
}

/// `(a, b) ∈ rf⁺` for write-likes: strictly earlier on the same rf-chain.
fn rf_chain_before(chains: &RfChainIndex, a: EventId, b: EventId) -> bool {
    chains.tc(a) == chains.tc(b) && chains.pc(a) < chains.pc(b)
}

/// `(a, b) ∈ rf?;hb`.
fn rf_hb_before(
    x: &PartialExecution,
    hb_before: &impl Fn(EventId, EventId) -> bool,
    a: EventId,
    b: EventId,
) -> bool {
    if hb_before(a, b) {
        return true;
    }
    x.readers_of(a).iter().any(|&r| r == b || hb_before(r, b))
}

fn has_cycle(
    succ: &HashMap<EventId, Vec<EventId>>,
    ids: impl Iterator<Item = EventId>,
) -> bool {
    // Kahn over the listed nodes.
    let nodes: Vec<EventId> = ids.collect();
    let set: HashSet<EventId> = nodes.iter().copied().collect();
    let mut indeg: HashMap<EventId, usize> = nodes.iter().map(|&n| (n, 0)).collect();
    for (&a, bs) in succ {
        if !set.contains(&a) {
            continue;
        }
        for b in bs {
            if let Some(d) = indeg.get_mut(b) {
                *d += 1;
            }
        }
    }
    let mut queue: VecDeque<EventId> =
        nodes.iter().copied().filter(|n| indeg[n] == 0).collect();
    let mut done = 0;
    while let Some(a) = queue.pop_front() {
        done += 1;
        for &b in succ.get(&a).into_iter().flatten() {
            if let Some(d) = indeg.get_mut(&b) {
                *d -= 1;
                if *d == 0 {
                    queue.push_back(b);
                }
            }
        }
    }
    done != nodes.len()
}

/// Expose the users' hb oracle for the witness module: `(a, b) ∈ hb` on the
/// unmodified execution.
pub(crate) fn hb_table(x: &PartialExecution) -> Option<HbTimestampTable> {
    exec_core::relations::porf_topo_order(x).ok()?;
    Some(hb_engine::compute_hb(x).expect("porf acyclicity checked"))
}
