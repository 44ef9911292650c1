//! Benchmark presets: parametric execution families that stress particular
//! code paths in the checkers. All are RA-consistent by construction, so
//! benchmarks measure full runs rather than early rejections.

use exec_core::{EventSpec, MemoryOrder, PartialExecution};
use std::collections::HashMap;

/// Recognized preset names.
pub const PRESET_NAMES: &[&str] = &[
    "fixed-chain-rw",
    "fixed-chain-wr",
    "new-read-events",
    "no-write-satur",
    "hb-aware",
];

/// Build a preset execution with roughly `n` events over `k` satellite
/// threads (plus the preset's fixed threads); `None` for unknown names.
pub fn gen_preset(name: &str, n: usize, k: usize) -> Option<PartialExecution> {
    assert!(n >= 8, "presets need at least 8 events");
    assert!(k >= 1, "presets need at least one satellite thread");
    use MemoryOrder::*;
    let mut threads: Vec<Vec<EventSpec>> = Vec::new();
    let mut rf: HashMap<u64, u64> = HashMap::new();
    match name {
        // A long RMW chain on x in one thread; satellites repeatedly read
        // the chain top and write thread-private locations. Stresses
        // rf-chain bookkeeping and repeated frontier queries that never
        // advance past the top.
        "fixed-chain-rw" => {
            let chain = (n / 2).max(2);
            threads.push(chain_thread(1, chain, &mut rf));
            let mut id = chain as u64;
            for s in 0..k {
                let mut t = Vec::new();
                let budget = per_satellite(n - chain, k, s);
                for j in 0..budget {
                    id += 1;
                    if j % 2 == 0 {
                        t.push(EventSpec::read(id, "x", Acq));
                        rf.insert(id, 1);
                    } else {
                        t.push(EventSpec::write(id, &format!("s{s}"), Rel));
                    }
                }
                threads.push(t);
            }
        }
        // Same chain, but satellites write first and then read the chain's
        // last RMW: every read observes the full chain through rf.
        "fixed-chain-wr" => {
            let chain = (n / 2).max(2);
            threads.push(chain_thread(1, chain, &mut rf));
            let last = chain as u64;
            let mut id = last;
            for s in 0..k {
                let mut t = Vec::new();
                let budget = per_satellite(n - chain, k, s);
                for j in 0..budget {
                    id += 1;
                    if j % 2 == 0 {
                        t.push(EventSpec::write(id, &format!("s{s}"), Rel));
                    } else {
                        t.push(EventSpec::read(id, "x", Acq));
                        rf.insert(id, last);
                    }
                }
                threads.push(t);
            }
        }
        // One thread keeps minting fresh writes of x; a second reads the
        // first of them and then floods y with writes; satellites write
        // privately and re-read the very first x write. Stresses handling
        // of reads that arrive interleaved with unrelated new events.
        "new-read-events" => {
            let m = (n / 4).max(2);
            let writer: Vec<EventSpec> =
                (1..=m as u64).map(|id| EventSpec::write(id, "x", Rel)).collect();
            threads.push(writer);
            let mut id = m as u64;
            let mut t0 = Vec::new();
            id += 1;
            t0.push(EventSpec::read(id, "x", Acq));
            rf.insert(id, 1);
            for _ in 0..m {
                id += 1;
                t0.push(EventSpec::write(id, "y", Rel));
            }
            threads.push(t0);
            let rest = n.saturating_sub(2 * m + 1);
            for s in 0..k {
                let mut t = Vec::new();
                let budget = per_satellite(rest, k, s);
                for j in 0..budget {
                    id += 1;
                    if j % 2 == 0 {
                        t.push(EventSpec::write(id, &format!("s{s}"), Rel));
                    } else {
                        t.push(EventSpec::read(id, "x", Acq));
                        rf.insert(id, 1);
                    }
                }
                threads.push(t);
            }
        }
        // Two threads saturating one location with writes, bridged by a
        // single release/acquire handoff: the second thread's writes are
        // hb-after all of the first's. Stresses observer-cursor advancement
        // without any read-side work. `k` is ignored.
        "no-write-satur" => {
            let half = n / 2;
            let mut t0: Vec<EventSpec> =
                (1..=half as u64).map(|id| EventSpec::write(id, "x", Rel)).collect();
            let y = half as u64 + 1;
            t0.push(EventSpec::write(y, "y", Rel));
            threads.push(t0);
            let mut t1 = vec![EventSpec::read(y + 1, "y", Acq)];
            rf.insert(y + 1, y);
            for id in (y + 2)..=(n as u64) {
                t1.push(EventSpec::write(id, "x", Rel));
            }
            threads.push(t1);
        }
        // k writer threads on private locations; one reader thread absorbs
        // all of them before running a write + RMW chain. Stresses hb
        // timestamps with genuinely k-dimensional clocks.
        "hb-aware" => {
            for s in 0..k {
                threads.push(vec![EventSpec::write(s as u64 + 1, &format!("w{s}"), Rel)]);
            }
            let mut t = Vec::new();
            let mut id = k as u64;
            for s in 0..k {
                id += 1;
                t.push(EventSpec::read(id, &format!("w{s}"), Acq));
                rf.insert(id, s as u64 + 1);
            }
            let chain = n.saturating_sub(2 * k).max(2);
            let base = id;
            t.extend(chain_thread(base + 1, chain, &mut rf));
            threads.push(t);
        }
        _ => return None,
    }
    Some(PartialExecution::new(threads, rf).expect("presets are valid executions"))
}

/// A plain release write of x followed by `len - 1` chained RMWs, ids
/// `first..first + len`.
fn chain_thread(first: u64, len: usize, rf: &mut HashMap<u64, u64>) -> Vec<EventSpec> {
    let mut t = vec![EventSpec::write(first, "x", MemoryOrder::Rel)];
    for id in (first + 1)..(first + len as u64) {
        t.push(EventSpec::rmw(id, "x", MemoryOrder::AcqRel));
        rf.insert(id, id - 1);
    }
    t
}

/// Split `total` events across `k` satellites, front-loading remainders.
fn per_satellite(total: usize, k: usize, s: usize) -> usize {
    total / k + usize::from(s < total % k)
}
