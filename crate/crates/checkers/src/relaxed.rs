//! §5.5: Relaxed consistency in O(n), independent of thread count. With
//! hb = po, the only coherence-visible predecessor at a read is the thread's
//! own last write (or the writer of its last read) on the location.

use crate::graph::CycleGraph;
use crate::{Reason, Verdict};
use exec_core::{EventId, ModificationOrder, PartialExecution};
use std::collections::HashMap;

/// Algorithm 3: Relaxed (RC20 with hb = po). Per-location graphs over
/// po-adjacent same-location accesses, rf, and m̄o forced by same-thread
/// coherence; consistent iff all are acyclic.
pub fn check_relaxed(x: &PartialExecution) -> Verdict {
    if let Err(cycle) = exec_core::relations::porf_topo_order(x) {
        return Verdict::inconsistent(Reason::PorfCycle { cycle });
    }
    if let Some(v) = exec_core::find_weak_atomicity_violation(x) {
        return Verdict::inconsistent(Reason::WeakAtomicity {
            rmw1: v.rmw1,
            rmw2: v.rmw2,
            writer: v.writer,
        });
    }
    let chains = exec_core::build_rf_chains(x).expect("weak atomicity checked");

    let mut graphs: Vec<CycleGraph> = (0..x.num_locs())
        .map(|loc| {
            let mut ids: Vec<EventId> = x.writes_on(loc).to_vec();
            ids.extend(x.reads_on(loc));
            ids.sort_unstable();
            CycleGraph::new(ids)
        })
        .collect();
    for (&r, &w) in x.rf() {
        let loc = x.event(r).loc.expect("reader has a location");
        graphs[loc].add_edge(w, r);
    }
    let mut mo_bar = ModificationOrder::empty_partial();

    for t in 0..x.num_threads() {
        // Per location: last same-thread access, and the last
        // coherence-visible write (own write, or writer of own read).
        let mut last_access: HashMap<usize, EventId> = HashMap::new();
        let mut last_write: HashMap<usize, EventId> = HashMap::new();
        for e in x.thread(t) {
            let Some(loc) = e.loc else { continue };
            if e.op == exec_core::Op::Fence {
                continue;
            }
            if let Some(&prev) = last_access.get(&loc) {
                graphs[loc].add_edge(prev, e.id);
            }
            if e.op.is_read_like() {
                let w_rf = x.writer_of(e.id).expect("reader has writer");
                if let Some(&w) = last_write.get(&loc) {
                    if w != w_rf {
                        let same_chain = chains.tc(w) == chains.tc(w_rf);
                        if same_chain && chains.pc(w) > chains.pc(w_rf) {
                            return Verdict::inconsistent(Reason::MoCycle {
                                loc: Some(x.loc_name(loc).to_string()),
                                cycle: vec![w, e.id],
                            });
                        }
                        if !same_chain {
                            let top = chains.tc(w_rf);
                            if w != top {
                                mo_bar.insert_pair(loc, w, top);
                                graphs[loc].add_edge(w, top);
                            }
                        }
                    }
                }
                // An RMW's own write side supersedes the writer it read.
                let vis = if e.op.is_write_like() { e.id } else { w_rf };
                last_write.insert(loc, vis);
            } else {
                last_write.insert(loc, e.id);
            }
            last_access.insert(loc, e.id);
        }
    }

    for (loc, g) in graphs.into_iter().enumerate() {
        if let Err(cycle) = g.toposort() {
            return Verdict::inconsistent(Reason::MoCycle {
                loc: Some(x.loc_name(loc).to_string()),
                cycle,
            });
        }
    }
    Verdict::consistent(Some(mo_bar))
}
