//! §5.4: RC20 checking via per-location cycle graphs over frontier-hb, rf,
//! and the derived partial m̄o. RA is the mode-strengthened instance.

use crate::graph::CycleGraph;
use crate::{Reason, Verdict};
use exec_core::{EventId, ModificationOrder, PartialExecution};
use hb_engine::ObserverLists;

/// RA consistency: RC20 on the mode-strengthened execution, so hb collapses
/// to (po ∪ rf)⁺.
pub fn check_ra(x: &PartialExecution) -> Verdict {
    check_rc20_inner(x, true)
}

/// Algorithm 2: RC20 consistency in O(n·k·log n). Per location, a graph over
/// the location's events with rf edges, frontier hb edges (last hb-earlier
/// access of each thread → current event), and m̄o edges forced by reads
/// (coherence-order predecessors of the read's writer, lifted to rf-chain
/// tops). Consistent iff every per-location graph is acyclic.
pub fn check_rc20(x: &PartialExecution) -> Verdict {
    check_rc20_inner(x, false)
}

/// `porf_hb` replaces mode-sensitive hb with (po ∪ rf)⁺ — the effect of
/// strengthening every access, i.e. the RA instance.
fn check_rc20_inner(x: &PartialExecution, porf_hb: bool) -> Verdict {
    let (_, dense_order) = match exec_core::relations::porf_topo_order_dense(x) {
        Ok(o) => o,
        Err(cycle) => return Verdict::inconsistent(Reason::PorfCycle { cycle }),
    };
    let chains = match exec_core::build_rf_chains(x) {
        Ok(chains) => chains,
        Err(v) => {
            return Verdict::inconsistent(Reason::WeakAtomicity {
                rmw1: v.rmw1,
                rmw2: v.rmw2,
                writer: v.writer,
            })
        }
    };
    let hb = if porf_hb {
        hb_engine::compute_hb_porf_dense_order(x, &dense_order)
    } else {
        hb_engine::compute_hb_dense_order(x, &dense_order)
    };
    let mut lists = ObserverLists::new(x);
    let k = x.num_threads();

    // Per-location graphs over the location's accesses.
    let mut graphs: Vec<CycleGraph> = (0..x.num_locs())
        .map(|loc| {
            let mut ids: Vec<EventId> = x.writes_on(loc).to_vec();
            ids.extend(x.reads_on(loc));
            ids.sort_unstable();
            CycleGraph::new(ids)
        })
        .collect();
    let mut mo_bar = ModificationOrder::empty_partial();
    // rf edges, restricted per location (rf never crosses locations).
    for (&r, &w) in x.rf() {
        let loc = x.event(r).loc.expect("reader has a location");
        graphs[loc].add_edge(w, r);
    }

    let mut frontier_writes: Vec<EventId> = Vec::with_capacity(2 * k);
    // Last frontier event already wired to this thread's chain, keyed
    // `(t * num_locs + loc) * k + u`. Cross-thread frontier edges are only
    // needed when the frontier advanced: the previous same-location access
    // of `t` carries the stale frontier transitively through the
    // same-thread chaining edges below.
    const NO_EVENT: EventId = EventId::MAX;
    let num_locs = x.num_locs();
    let mut wired: Vec<(EventId, EventId)> = vec![(NO_EVENT, NO_EVENT); k * num_locs * k];
    for t in 0..k {
        for e in x.thread(t) {
            let Some(loc) = e.loc else { continue };
            if e.op == exec_core::Op::Fence {
                continue;
            }
            // Frontier hb edges: the per-thread hb-latest access of loc
            // reaching e. Same-thread accesses chain these into full hb_loc
            // reachability on the location graph.
            frontier_writes.clear();
            let row = hb.row(e);
            for u in 0..k {
                let c = if u == t { e.idx as u32 - 1 } else { row[u] };
                let lw = lists
                    .last_write_before(u, loc, c, t)
                    .expect("po-ordered queries are monotone");
                let lr = lists
                    .last_read_before(u, loc, c, t)
                    .expect("po-ordered queries are monotone");
                let slot = &mut wired[(t * num_locs + loc) * k + u];
                if let Some(lw) = lw {
                    if u == t || slot.0 != lw {
                        graphs[loc].add_edge(lw, e.id);
                        slot.0 = lw;
                    }
                    frontier_writes.push(lw);
                }
                if let Some(lr) = lr {
                    if u == t || slot.1 != lr {
                        graphs[loc].add_edge(lr, e.id);
                        slot.1 = lr;
                    }
                    // The writer read by lr is also coherence-visible at e.
                    let w = x.writer_of(lr).expect("reader has writer");
                    frontier_writes.push(w);
                }
            }
            if e.op.is_read_like() {
                let w_rf = x.writer_of(e.id).expect("reader has writer");
                for &w in &frontier_writes {
                    if w == w_rf {
                        continue;
                    }
                    // Coherence forces w mo-before w_rf's chain unless w is
                    // itself on w_rf's chain at an earlier position.
                    let same_chain = chains.tc(w) == chains.tc(w_rf);
                    if same_chain && chains.pc(w) <= chains.pc(w_rf) {
                        continue;
                    }
                    if same_chain {
                        // w is strictly later on the same chain: immediate
                        // coherence violation (fr ∩ chain).
                        return Verdict::inconsistent(Reason::MoCycle {
                            loc: Some(x.loc_name(loc).to_string()),
                            cycle: vec![w, e.id],
                        });
                    }
                    let top = chains.tc(w_rf);
                    if w != top {
                        mo_bar.insert_pair(loc, w, top);
                        graphs[loc].add_edge(w, top);
                    }
                }
            }
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
