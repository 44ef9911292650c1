//! §5.1: the WRA checker — hb-sandwich detection via HB timestamps and
//! monotone lastWriteBefore queries, O(n·k).

use crate::{Reason, Verdict};
use exec_core::PartialExecution;
use hb_engine::ObserverLists;

/// WRA consistency: (po ∪ rf) acyclic ∧ weak-atomicity ∧ no read/RMW `e` with
/// a write/RMW `w′ ∉ {rf⁻¹(e), e}` holding `(rf⁻¹(e), w′) ∈ hb ∧ (w′, e) ∈
/// hb`. WRA's axioms never mention mo, so Consistent verdicts carry no m̄o.
pub fn check_wra(x: &PartialExecution) -> Verdict {
    // WRA lives in the rel/acq fragment: hb is (po ∪ rf)⁺, which
    // compute_hb_porf yields without materializing a strengthened copy.
    let xs = x;
    let (_, dense_order) = match exec_core::relations::porf_topo_order_dense(xs) {
        Ok(o) => o,
        Err(cycle) => return Verdict::inconsistent(Reason::PorfCycle { cycle }),
    };
    if let Some(v) = exec_core::find_weak_atomicity_violation(xs) {
        return Verdict::inconsistent(Reason::WeakAtomicity {
            rmw1: v.rmw1,
            rmw2: v.rmw2,
            writer: v.writer,
        });
    }
    let hb = hb_engine::compute_hb_porf_dense_order(xs, &dense_order);
    let mut lists = ObserverLists::new(xs);
    let k = xs.num_threads();

    for t in 0..k {
        for e in xs.thread(t) {
            if !e.op.is_read_like() {
                continue;
            }
            let loc = e.loc.expect("reader has a location");
            let w_rf = xs.writer_of(e.id).expect("reader has writer");
            let w_rf_ev = *xs.event(w_rf);
            let row = hb.row(e);
            for u in 0..k {
                // Own-thread horizon stops just before e so e (an RMW) never
                // reports itself; foreign horizons are e's hb view of u.
                let c = if u == t { e.idx as u32 - 1 } else { row[u] };
                let w2 = lists
                    .last_write_before(u, loc, c, t)
                    .expect("po-ordered queries are monotone");
                let Some(w2) = w2 else { continue };
                if w2 == w_rf {
                    continue;
                }
                // (w2, e) ∈ hb holds by construction of the horizon; the
                // sandwich closes iff (w_rf, w2) ∈ hb.
                if hb.hb_before(&w_rf_ev, xs.event(w2)) {
                    return Verdict::inconsistent(Reason::WeakReadCoherence {
                        read: e.id,
                        writer: w_rf,
                        sandwiched: w2,
                    });
                }
            }
        }
    }
    Verdict::consistent(None)
}
