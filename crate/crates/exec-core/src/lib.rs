//! Core execution-graph model: events, partial executions, derived relations,
//! rf-chains, and conflicting triplets.
//!
//! A *partial execution* is a set of events arranged in per-thread program
//! order (po) together with a reads-from map (rf) assigning every read/RMW its
//! unique writer. Consistency checking asks whether some per-location
//! modification order (mo) turns the execution consistent under a memory
//! model's axioms; this crate supplies the shared substrate those checks are
//! built on.
//!
//! Values are deliberately absent from events: reads-from consistency is a
//! property of the graph shape alone.

mod event;
mod exec;
mod mo;
pub mod relations;

pub use event::{Event, EventId, LocId, MemoryOrder, Op, ThreadId};
pub use exec::{EventSpec, PartialExecution, ValidateError};
pub use mo::ModificationOrder;
pub use relations::{RelationBundle, Relation};

use rustc_hash::FxHashMap;

/// Top-of-chain and position-in-chain maps over write/RMW events.
///
/// Under weak-atomicity the write/RMW events split into disjoint *rf-chains*:
/// a plain write followed by the maximal sequence of RMWs each reading its
/// predecessor. `tc[e]` is the unique plain-write top of `e`'s chain and
/// `pc[e]` its 0-based position in the chain.
#[derive(Debug, Clone, Default)]
pub struct RfChainIndex {
    tc: FxHashMap<EventId, EventId>,
    pc: FxHashMap<EventId, usize>,
    /// Hash-free query path for compact id ranges, keyed directly by id
    /// (`EventId::MAX` / empty = fall back to the maps).
    tc_dense: Vec<EventId>,
    pc_dense: Vec<u32>,
}

impl RfChainIndex {
    /// Chain top of write/RMW `e`. Panics if `e` is not a write/RMW of the
    /// indexed execution.
    #[inline]
    pub fn tc(&self, e: EventId) -> EventId {
        if !self.tc_dense.is_empty() {
            let t = self.tc_dense[e as usize];
            assert!(t != EventId::MAX, "not an indexed write/RMW: {e}");
            return t;
        }
        self.tc[&e]
    }

    /// Chain position of write/RMW `e` (0 for a plain write).
    #[inline]
    pub fn pc(&self, e: EventId) -> usize {
        if !self.tc_dense.is_empty() {
            assert!(self.tc_dense[e as usize] != EventId::MAX, "not an indexed write/RMW: {e}");
            return self.pc_dense[e as usize] as usize;
        }
        self.pc[&e]
    }

}

/// A conflicting triplet `(w, r, w2)`: all on one location, `rf⁻¹(r) = w`,
/// and `w2` a write/RMW distinct from both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triplet {
    pub w: EventId,
    pub r: EventId,
    pub w2: EventId,
}

/// Error raised by [`build_rf_chains`] when two RMWs share a writer.
#[derive(Debug, thiserror::Error)]
#[error("weak atomicity violated: RMWs {rmw1} and {rmw2} both read from {writer}")]
pub struct WeakAtomicityViolated {
    pub rmw1: EventId,
    pub rmw2: EventId,
    pub writer: EventId,
}

/// True iff the directed graph with edges = immediate-po ∪ rf has no cycle.
pub fn check_porf_acyclic(x: &PartialExecution) -> bool {
    relations::porf_topo_order(x).is_ok()
}

/// True iff no two distinct RMW events share the same rf writer.
pub fn check_weak_atomicity(x: &PartialExecution) -> bool {
    find_weak_atomicity_violation(x).is_none()
}

/// First weak-atomicity violation in event-id order, if any.
pub fn find_weak_atomicity_violation(x: &PartialExecution) -> Option<WeakAtomicityViolated> {
    // Fast existence scan in thread order; the id-sorted pass that pins down
    // the canonical (smallest-ids) violation only runs when one exists.
    let violated = if let Some(bound) = x.compact_id_bound() {
        let mut seen = vec![false; bound]; // writer id -> already read by an RMW
        'scan_dense: {
            for t in 0..x.num_threads() {
                for e in x.thread(t) {
                    if e.op != Op::Rmw {
                        continue;
                    }
                    let w = x.writer_of(e.id).expect("rmw has a writer");
                    if std::mem::replace(&mut seen[w as usize], true) {
                        break 'scan_dense true;
                    }
                }
            }
            false
        }
    } else {
        let mut seen: FxHashMap<EventId, EventId> = FxHashMap::default();
        'scan: {
            for t in 0..x.num_threads() {
                for e in x.thread(t) {
                    if e.op != Op::Rmw {
                        continue;
                    }
                    let w = x.writer_of(e.id).expect("rmw has a writer");
                    if seen.insert(w, e.id).is_some() {
                        break 'scan true;
                    }
                }
            }
            false
        }
    };
    if !violated {
        return None;
    }
    let mut seen: FxHashMap<EventId, EventId> = FxHashMap::default(); // writer -> rmw reader
    let mut rmws: Vec<EventId> = x
        .events()
        .filter(|e| e.op == Op::Rmw)
        .map(|e| e.id)
        .collect();
    rmws.sort_unstable();
    for r in rmws {
        let w = x.writer_of(r).expect("rmw has a writer");
        if let Some(&prev) = seen.get(&w) {
            return Some(WeakAtomicityViolated {
                rmw1: prev,
                rmw2: r,
                writer: w,
            });
        }
        seen.insert(w, r);
    }
    unreachable!("violation found in the existence scan")
}

/// Builds the rf-chain index in a single linear pass.
///
/// Requires weak-atomicity: chains must partition the write/RMW events.
pub fn build_rf_chains(x: &PartialExecution) -> Result<RfChainIndex, WeakAtomicityViolated> {
    if let Some(v) = find_weak_atomicity_violation(x) {
        return Err(v);
    }
    let mut idx = RfChainIndex::default();
    // Plain writes are chain tops. RMWs are resolved by following rf links up
    // to the top, memoizing along the way (iterative to keep it one pass over
    // each link). Compact id ranges build the flat arrays directly and leave
    // the maps empty; sparse ranges use the maps.
    if let Some(bound) = x.compact_id_bound() {
        idx.tc_dense = vec![EventId::MAX; bound];
        idx.pc_dense = vec![0; bound];
        let mut stack: Vec<EventId> = Vec::new();
        for e in x.events() {
            if e.op == Op::Write {
                idx.tc_dense[e.id as usize] = e.id;
            }
        }
        for e in x.events() {
            if e.op != Op::Rmw || idx.tc_dense[e.id as usize] != EventId::MAX {
                continue;
            }
            stack.clear();
            stack.push(e.id);
            let mut cur = x.writer_of(e.id).expect("rmw has a writer");
            while idx.tc_dense[cur as usize] == EventId::MAX {
                stack.push(cur);
                cur = x.writer_of(cur).expect("rmw has a writer");
            }
            let top = idx.tc_dense[cur as usize];
            let mut pos = idx.pc_dense[cur as usize];
            for &id in stack.iter().rev() {
                pos += 1;
                idx.tc_dense[id as usize] = top;
                idx.pc_dense[id as usize] = pos;
            }
        }
    } else {
        for e in x.events() {
            if e.op == Op::Write {
                idx.tc.insert(e.id, e.id);
                idx.pc.insert(e.id, 0);
            }
        }
        for e in x.events() {
            if e.op != Op::Rmw || idx.tc.contains_key(&e.id) {
                continue;
            }
            let mut stack = vec![e.id];
            let mut cur = x.writer_of(e.id).expect("rmw has a writer");
            while !idx.tc.contains_key(&cur) {
                stack.push(cur);
                cur = x.writer_of(cur).expect("rmw has a writer");
            }
            let top = idx.tc[&cur];
            let mut pos = idx.pc[&cur];
            for id in stack.into_iter().rev() {
                pos += 1;
                idx.tc.insert(id, top);
                idx.pc.insert(id, pos);
            }
        }
    }
    Ok(idx)
}

/// Enumerates every conflicting triplet of the execution.
///
/// Quadratic per location; intended for oracles and small-scale predicates,
/// not the O(n·k) checkers.
pub fn triplets(x: &PartialExecution) -> Vec<Triplet> {
    let mut out = Vec::new();
    for loc in 0..x.num_locs() {
        let writes = x.writes_on(loc);
        for r in x.reads_on(loc) {
            let w = x.writer_of(*r).expect("reader has writer");
            for &w2 in writes {
                if w2 != w && w2 != *r {
                    out.push(Triplet { w, r: *r, w2 });
                }
            }
        }
    }
    out
}

/// Returns a copy with every access strengthened into the rel/acq fragment:
/// writes→rel, reads→acq, RMWs→acqrel. Fence modes are unchanged (with all
/// accesses ⊒rel/⊒acq, hb already equals (po ∪ rf)⁺ regardless of fences).
pub fn strengthen_modes(x: &PartialExecution) -> PartialExecution {
    x.map_modes(|op, ord| match op {
        Op::Write => MemoryOrder::Rel,
        Op::Read => MemoryOrder::Acq,
        Op::Rmw => MemoryOrder::AcqRel,
        Op::Fence => ord,
    })
}
