//! Happens-before vector timestamps for mixed rel/acq/rlx executions with
//! fences, plus monotone `lastWriteBefore` / `lastReadBefore` queries.
//!
//! `HB_e(t)` counts the events `f` of thread `t` with `(f, e) ∈ hb?` — i.e.
//! the length of the hb-visible prefix of `t` at `e` (including `e` itself in
//! its own thread). Timestamps are computed in one streaming pass over a
//! topological order of `po ∪ rf`, carrying the per-thread synchronization
//! clocks of the appendix algorithm: the running clock `H_t`, the
//! last-release-fence clock, the fence-absorbable `SW_t`, the per-write
//! release frontier `LRF`, and the per-RMW chain frontier `RMW_sw`.
//!
//! The observer lists serve `lastWriteBefore(t, x, c)` — the po-maximal
//! write/RMW of `t` on `x` with thread-local index ≤ `c` — through persistent
//! per-observer cursors, so total query cost over a checker run is O(n·k).

use exec_core::{Event, EventId, LocId, Op, PartialExecution, ThreadId};


/// Per-event vectors of per-thread counters realizing hb. Stored flat in
/// (tid, idx) coordinates so the hot accessors ([`Self::row`],
/// [`Self::hb_before`]) are pure arithmetic; the id-keyed accessors exist
/// for callers that only hold an event id.
#[derive(Debug, Clone)]
pub struct HbTimestampTable {
    k: usize,
    /// Dense row of thread `t`'s first event; rows follow program order.
    offsets: Vec<usize>,
    /// Row-major `n × k` matrix: row `offsets[tid] + idx - 1`.
    flat: Vec<u32>,
    /// (id, dense row) sorted by id, for the id-keyed accessors.
    index: Vec<(EventId, u32)>,
}

impl HbTimestampTable {
    /// Thread count the vectors range over.
    pub fn num_threads(&self) -> usize {
        self.k
    }

    fn dense(&self, e: &Event) -> usize {
        self.offsets[e.tid] + e.idx - 1
    }

    /// The full vector of event `e`, hash-free.
    #[inline]
    pub fn row(&self, e: &Event) -> &[u32] {
        let r = self.dense(e) * self.k;
        &self.flat[r..r + self.k]
    }

    /// The full vector of event `e`.
    pub fn vector(&self, e: EventId) -> &[u32] {
        let i = self.index.binary_search_by_key(&e, |&(id, _)| id).expect("unknown event");
        let r = self.index[i].1 as usize * self.k;
        &self.flat[r..r + self.k]
    }

    /// `HB_e(t)`.
    pub fn get(&self, e: EventId, t: ThreadId) -> u32 {
        self.vector(e)[t]
    }

    /// True iff `(a, b) ∈ hb` (strict): `a` is inside `b`'s hb-visible prefix
    /// and they are distinct.
    #[inline]
    pub fn hb_before(&self, a: &Event, b: &Event) -> bool {
        a.id != b.id && self.flat[self.dense(b) * self.k + a.tid] >= a.idx as u32
    }
}

/// `compute_hb` failure: the execution has a `po ∪ rf` cycle.
#[derive(Debug, thiserror::Error)]
#[error("po ∪ rf is cyclic: {cycle:?}")]
pub struct PorfCyclic {
    pub cycle: Vec<EventId>,
}

fn join(dst: &mut [u32], src: &[u32]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if *s > *d {
            *d = *s;
        }
    }
}

/// Per-event facts of the hb pass, packed into flat arrays over dense
/// indices. The topo-order loops are random-access over the event set;
/// keeping their working set at a few bytes per event (instead of whole
/// `Event` structs fetched through id maps) is what holds the pass at
/// memory-linear cost.
struct DenseMeta {
    offsets: Vec<usize>,
    /// Bits 0–1: op (0 write, 1 read, 2 rmw, 3 fence); bit 2: ⊒rel;
    /// bit 3: ⊒acq.
    meta: Vec<u8>,
    tids: Vec<u32>,
    /// Dense index of the rf writer (read-likes only; 0 elsewhere).
    writer_d: Vec<u32>,
    index: Vec<(EventId, u32)>,
}

const OP_WRITE: u8 = 0;
const OP_READ: u8 = 1;
const OP_RMW: u8 = 2;
const OP_FENCE: u8 = 3;
const IS_REL: u8 = 1 << 2;
const IS_ACQ: u8 = 1 << 3;

fn dense_meta(x: &PartialExecution) -> DenseMeta {
    let k = x.num_threads();
    let n = x.num_events();
    let mut offsets = Vec::with_capacity(k);
    let mut acc = 0usize;
    for t in 0..k {
        offsets.push(acc);
        acc += x.thread(t).len();
    }
    let mut meta = vec![0u8; n];
    let mut tids = vec![0u32; n];
    let mut writer_d = vec![0u32; n];
    let mut index: Vec<(EventId, u32)> = Vec::with_capacity(n);
    for t in 0..k {
        for e in x.thread(t) {
            let d = offsets[t] + e.idx - 1;
            let mut m = match e.op {
                Op::Write => OP_WRITE,
                Op::Read => OP_READ,
                Op::Rmw => OP_RMW,
                Op::Fence => OP_FENCE,
            };
            if e.ord.is_release() {
                m |= IS_REL;
            }
            if e.ord.is_acquire() {
                m |= IS_ACQ;
            }
            meta[d] = m;
            tids[d] = t as u32;
            if e.op.is_read_like() {
                let w = x.writer_of(e.id).expect("reader has writer");
                let (wt, wi) = x.coords(w);
                writer_d[d] = (offsets[wt] + wi) as u32;
            }
            index.push((e.id, d as u32));
        }
    }
    index.sort_unstable();
    DenseMeta { offsets, meta, tids, writer_d, index }
}

/// Computes the HB table in O(n·k): one pass over a Kahn topological order of
/// `po ∪ rf` (ties broken by smallest event id; the result is
/// order-invariant).
pub fn compute_hb(x: &PartialExecution) -> Result<HbTimestampTable, PorfCyclic> {
    let (_, dense_order) = exec_core::relations::porf_topo_order_dense(x)
        .map_err(|cycle| PorfCyclic { cycle })?;
    Ok(compute_hb_dense_order(x, &dense_order))
}

/// Same computation over a caller-supplied topological order of `po ∪ rf`
/// given as event ids. The table is order-invariant; this entry point exists
/// so tests can assert that. The order must be a valid topological order
/// over all events.
pub fn compute_hb_with_order(x: &PartialExecution, order: &[EventId]) -> HbTimestampTable {
    compute_hb_dense_order(x, &dense_order_of(x, order))
}

fn dense_order_of(x: &PartialExecution, order: &[EventId]) -> Vec<u32> {
    order
        .iter()
        .map(|&id| {
            let e = x.event(id);
            let mut off = 0usize;
            for t in 0..e.tid {
                off += x.thread(t).len();
            }
            (off + e.idx - 1) as u32
        })
        .collect()
}

/// [`compute_hb`] over a topological order in dense coordinates (as produced
/// by `porf_topo_order_dense`), the allocation- and hash-free hot path.
pub fn compute_hb_dense_order(x: &PartialExecution, dense_order: &[u32]) -> HbTimestampTable {
    let k = x.num_threads();
    let n = x.num_events();
    let dm = dense_meta(x);

    let zeros = vec![0u32; k];
    let mut h: Vec<Vec<u32>> = vec![zeros.clone(); k]; // running clock per thread
    let mut sw: Vec<Vec<u32>> = vec![zeros.clone(); k]; // acq-fence-absorbable sync
    let mut fence_rel: Vec<Vec<u32>> = vec![zeros.clone(); k]; // last ⊒rel fence HB
    // Dense-indexed flat n × k matrices; written only for write-likes (lrf)
    // resp. RMWs (rmw_sw), always before any reader consults them.
    let mut lrf = vec![0u32; n * k]; // per write/RMW
    let mut rmw_sw = vec![0u32; n * k]; // per RMW
    let mut is_rmw = vec![false; n];
    let mut flat = vec![0u32; n * k];
    let mut sync = zeros; // scratch

    for &d32 in dense_order {
        let d = d32 as usize;
        let m = dm.meta[d];
        let t = dm.tids[d] as usize;
        h[t][t] += 1;
        match m & 0b11 {
            OP_WRITE => {
                let src = if m & IS_REL != 0 { &h[t] } else { &fence_rel[t] };
                lrf[d * k..(d + 1) * k].copy_from_slice(src);
                flat[d * k..(d + 1) * k].copy_from_slice(&h[t]);
            }
            OP_READ | OP_RMW => {
                let dw = dm.writer_d[d] as usize;
                // Everything that release-synchronizes into e through its
                // final rf edge: the writer's release frontier, extended
                // through the chain when the writer is an RMW.
                sync.copy_from_slice(&lrf[dw * k..(dw + 1) * k]);
                if is_rmw[dw] {
                    join(&mut sync, &rmw_sw[dw * k..(dw + 1) * k]);
                }
                if m & IS_ACQ != 0 {
                    join(&mut h[t], &sync);
                }
                // Recorded even for rlx reads: a later ⊒acq fence completes
                // the (po;[F]) tail of sw.
                join(&mut sw[t], &sync);
                if m & 0b11 == OP_RMW {
                    is_rmw[d] = true;
                    rmw_sw[d * k..(d + 1) * k].copy_from_slice(&sync);
                    let src = if m & IS_REL != 0 { &h[t] } else { &fence_rel[t] };
                    lrf[d * k..(d + 1) * k].copy_from_slice(src);
                }
                flat[d * k..(d + 1) * k].copy_from_slice(&h[t]);
            }
            _ => {
                if m & IS_ACQ != 0 {
                    sync.copy_from_slice(&sw[t]);
                    join(&mut h[t], &sync);
                }
                if m & IS_REL != 0 {
                    fence_rel[t].copy_from_slice(&h[t]);
                }
                flat[d * k..(d + 1) * k].copy_from_slice(&h[t]);
            }
        }
    }
    HbTimestampTable { k, offsets: dm.offsets, flat, index: dm.index }
}

/// HB timestamps of `(po ∪ rf)⁺` directly, ignoring modes: every rf edge
/// synchronizes. This is exactly the hb of the mode-strengthened execution
/// (writes→rel, reads→acq, RMWs→acqrel), so the rel/acq-fragment checkers
/// use it without materializing a strengthened copy. Fences contribute
/// nothing beyond po here: with every read acquiring, fence-mediated sw is
/// already absorbed.
pub fn compute_hb_porf(x: &PartialExecution) -> Result<HbTimestampTable, PorfCyclic> {
    let (_, dense_order) = exec_core::relations::porf_topo_order_dense(x)
        .map_err(|cycle| PorfCyclic { cycle })?;
    Ok(compute_hb_porf_dense_order(x, &dense_order))
}

/// [`compute_hb_porf`] with a caller-supplied `(po ∪ rf)` topological order,
/// for callers that already established acyclicity.
pub fn compute_hb_porf_with_order(x: &PartialExecution, order: &[EventId]) -> HbTimestampTable {
    compute_hb_porf_dense_order(x, &dense_order_of(x, order))
}

/// [`compute_hb_porf`] over a topological order in dense coordinates.
pub fn compute_hb_porf_dense_order(x: &PartialExecution, dense_order: &[u32]) -> HbTimestampTable {
    let k = x.num_threads();
    let n = x.num_events();
    let dm = dense_meta(x);

    let mut h: Vec<Vec<u32>> = vec![vec![0u32; k]; k];
    let mut flat = vec![0u32; n * k];
    for &d32 in dense_order {
        let d = d32 as usize;
        let t = dm.tids[d] as usize;
        h[t][t] += 1;
        if dm.meta[d] & 0b11 == OP_READ || dm.meta[d] & 0b11 == OP_RMW {
            let dw = dm.writer_d[d] as usize * k;
            let row = &flat[dw..dw + k];
            // `join` needs disjoint borrows of h[t] and flat.
            for (dst, &s) in h[t].iter_mut().zip(row) {
                if s > *dst {
                    *dst = s;
                }
            }
        }
        flat[d * k..(d + 1) * k].copy_from_slice(&h[t]);
    }
    HbTimestampTable { k, offsets: dm.offsets, flat, index: dm.index }
}

/// Cursor-regression error: a checker queried an observer list with a smaller
/// index than before. Signals a checker bug, not bad input.
#[derive(Debug, thiserror::Error)]
#[error("observer cursor moved backwards: thread {t}, loc {loc}, observer {observer}, c {c} < {prev}")]
pub struct MonotonicityViolated {
    pub t: ThreadId,
    pub loc: LocId,
    pub observer: ThreadId,
    pub c: u32,
    pub prev: u32,
}

#[derive(Debug, Clone, Default)]
struct Cursor {
    pos: usize,
    prev_c: u32,
}

/// Per-(thread, location) write/read lists with persistent per-observer
/// cursors.
///
/// One checker instance owns one `ObserverLists`; queries from a fixed
/// `(t, x, observer)` must arrive with non-decreasing `c`, which each cursor
/// enforces. An aggregate advancement counter backs the O(n·k) cost
/// assertion.
#[derive(Debug)]
pub struct ObserverLists {
    k: usize,
    num_locs: usize,
    /// Indexed `t * num_locs + loc`.
    wlists: Vec<Vec<(u32, EventId)>>,
    rlists: Vec<Vec<(u32, EventId)>>,
    /// Indexed `(t * num_locs + loc) * k + observer`.
    wcursors: Vec<Cursor>,
    rcursors: Vec<Cursor>,
    advanced: u64,
}

impl ObserverLists {
    pub fn new(x: &PartialExecution) -> Self {
        let k = x.num_threads();
        let num_locs = x.num_locs();
        let mut wlists: Vec<Vec<(u32, EventId)>> = vec![Vec::new(); k * num_locs];
        let mut rlists: Vec<Vec<(u32, EventId)>> = vec![Vec::new(); k * num_locs];
        for t in 0..k {
            for e in x.thread(t) {
                if let Some(l) = e.loc {
                    if e.op.is_write_like() {
                        wlists[t * num_locs + l].push((e.idx as u32, e.id));
                    }
                    if e.op.is_read_like() {
                        rlists[t * num_locs + l].push((e.idx as u32, e.id));
                    }
                }
            }
        }
        ObserverLists {
            k,
            num_locs,
            wlists,
            rlists,
            wcursors: vec![Cursor::default(); k * num_locs * k],
            rcursors: vec![Cursor::default(); k * num_locs * k],
            advanced: 0,
        }
    }

    /// Total cursor advancement across all lists so far.
    pub fn total_advancement(&self) -> u64 {
        self.advanced
    }

    #[allow(clippy::too_many_arguments)]
    fn query(
        lists: &[Vec<(u32, EventId)>],
        cursors: &mut [Cursor],
        advanced: &mut u64,
        k: usize,
        num_locs: usize,
        t: ThreadId,
        loc: LocId,
        c: u32,
        observer: ThreadId,
    ) -> Result<Option<EventId>, MonotonicityViolated> {
        let li = t * num_locs + loc;
        let list = &lists[li];
        if list.is_empty() {
            return Ok(None);
        }
        let cur = &mut cursors[li * k + observer];
        if c < cur.prev_c {
            return Err(MonotonicityViolated { t, loc, observer, c, prev: cur.prev_c });
        }
        cur.prev_c = c;
        while cur.pos < list.len() && list[cur.pos].0 <= c {
            cur.pos += 1;
            *advanced += 1;
        }
        Ok(if cur.pos == 0 { None } else { Some(list[cur.pos - 1].1) })
    }

    /// The po-maximal write/RMW of thread `t` on `x` with thread-local index
    /// ≤ `c`, or `None`.
    #[inline]
    pub fn last_write_before(
        &mut self,
        t: ThreadId,
        loc: LocId,
        c: u32,
        observer: ThreadId,
    ) -> Result<Option<EventId>, MonotonicityViolated> {
        Self::query(
            &self.wlists,
            &mut self.wcursors,
            &mut self.advanced,
            self.k,
            self.num_locs,
            t,
            loc,
            c,
            observer,
        )
    }

    /// Mirror of [`Self::last_write_before`] for read/RMW events.
    #[inline]
    pub fn last_read_before(
        &mut self,
        t: ThreadId,
        loc: LocId,
        c: u32,
        observer: ThreadId,
    ) -> Result<Option<EventId>, MonotonicityViolated> {
        Self::query(
            &self.rlists,
            &mut self.rcursors,
            &mut self.advanced,
            self.k,
            self.num_locs,
            t,
            loc,
            c,
            observer,
        )
    }
}
