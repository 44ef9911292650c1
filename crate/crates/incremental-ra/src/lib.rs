//! Online RA consistency over event streams. A [`Session`] ingests writes,
//! reads, RMWs, and fences one at a time and answers, per event, whether the
//! execution so far stays RA-consistent — without revisiting history.
//!
//! The state is vector clocks throughout: per-thread hb clocks `H_t`, per
//! write a stored hb timestamp, and per rf-chain an `HBMO` clock recording
//! which events are already forced hb∪mo-before that chain's block. A read of
//! `w_rf` must order every currently-visible same-location write's chain
//! before `w_rf`'s chain; a contradiction with an existing `HBMO` entry (or
//! with rf-chain positions) is exactly an mo cycle, so the event is rejected.
//! All checks run on scratch state first: a rejected event leaves the
//! session's committed state untouched.
//!
//! Under RA every rf edge synchronizes, so memory orders are irrelevant here
//! and the API does not take them; fences are hb no-ops and only advance the
//! thread's event index.

use std::collections::HashMap;
use thiserror::Error;

/// Thread index, `0..k`.
pub type ThreadId = usize;
/// Stream-assigned event id (any strictly positive, unique value).
pub type EventId = u64;

/// Per-event outcome: does the execution remain RA-consistent with this
/// event appended?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepResult {
    /// Event appended; the execution so far is RA-consistent.
    Accepted,
    /// Appending the event is RA-inconsistent; session state is unchanged
    /// and the session is dead.
    Rejected,
}

/// Stream-shape errors, distinct from consistency rejections.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    /// `from` names an event id that is not a known write-like event.
    #[error("unknown writer id {0}")]
    UnknownWriter(EventId),
    /// `from` names a write on a different location.
    #[error("writer {writer} is on location {writer_loc:?}, not {loc:?}")]
    LocMismatch { writer: EventId, writer_loc: String, loc: String },
    /// The session already rejected an event; no further events are accepted.
    #[error("session is dead after a rejection")]
    SessionDead,
    /// Two RMWs read from the same write (weak atomicity violation).
    #[error("writer {writer} already feeds an RMW")]
    WriterAlreadyConsumed { writer: EventId },
    /// An event id was used twice.
    #[error("duplicate event id {0}")]
    DuplicateId(EventId),
    /// A thread index out of `0..k`.
    #[error("thread {tid} out of range for {k} threads")]
    BadThread { tid: ThreadId, k: usize },
}

#[derive(Debug, Clone)]
struct WriteInfo {
    tid: ThreadId,
    /// 1-based event index within its thread.
    idx: u32,
    loc: usize,
    /// Chain top (a plain write's id; its own id if plain).
    tc: EventId,
    /// Position on the chain (0 for the top).
    pc: u32,
    /// hb timestamp of the write.
    hb: Vec<u32>,
}

/// Incremental RA consistency checker for a fixed thread count.
#[derive(Debug)]
pub struct Session {
    k: usize,
    /// Per-thread hb clock; `h[t][t]` counts events of thread t so far.
    h: Vec<Vec<u32>>,
    writes: HashMap<EventId, WriteInfo>,
    /// Chain-top id -> HBMO clock: events forced hb∪mo-before the block.
    hbmo: HashMap<EventId, Vec<u32>>,
    /// (thread, loc) -> write-likes in po order, as (idx, id).
    write_lists: HashMap<(ThreadId, usize), Vec<(u32, EventId)>>,
    /// Writes already feeding an RMW.
    consumed: HashMap<EventId, EventId>,
    locs: Vec<String>,
    loc_index: HashMap<String, usize>,
    seen_ids: std::collections::HashSet<EventId>,
    dead: bool,
}

/// Start a session for `k` threads.
pub fn new_session(k: usize) -> Session {
    Session::new(k)
}

impl Session {
    pub fn new(k: usize) -> Session {
        Session {
            k,
            h: vec![vec![0; k]; k],
            writes: HashMap::new(),
            hbmo: HashMap::new(),
            write_lists: HashMap::new(),
            consumed: HashMap::new(),
            locs: Vec::new(),
            loc_index: HashMap::new(),
            seen_ids: Default::default(),
            dead: false,
        }
    }

    pub fn num_threads(&self) -> usize {
        self.k
    }

    /// Events accepted so far.
    pub fn len(&self) -> usize {
        self.seen_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen_ids.is_empty()
    }

    /// Append a plain write. Writes never reject: they only extend hb and
    /// found a fresh rf-chain.
    pub fn on_write(
        &mut self,
        id: EventId,
        tid: ThreadId,
        loc: &str,
    ) -> Result<StepResult, SessionError> {
        self.pre_admit(id, tid)?;
        let x = self.intern_loc(loc);
        self.seen_ids.insert(id);
        self.h[tid][tid] += 1;
        let hb = self.h[tid].clone();
        let idx = hb[tid];
        // Everything hb∪mo-before the po-previous same-location write's
        // block is before this fresh block too.
        let mut clock = hb.clone();
        if let Some(prev) = self.last_write_before(tid, x, idx - 1) {
            let prev_tc = self.writes[&prev].tc;
            join(&mut clock, &self.hbmo[&prev_tc]);
        }
        self.writes.insert(id, WriteInfo { tid, idx, loc: x, tc: id, pc: 0, hb });
        self.hbmo.insert(id, clock);
        self.write_lists.entry((tid, x)).or_default().push((idx, id));
        self.po_propagate(id);
        Ok(StepResult::Accepted)
    }

    /// Append a read of write `from`.
    pub fn on_read(
        &mut self,
        id: EventId,
        tid: ThreadId,
        loc: &str,
        from: EventId,
    ) -> Result<StepResult, SessionError> {
        self.pre_admit(id, tid)?;
        let x = self.resolve_writer(loc, from)?;
        let Some((hb_e, pred)) = self.read_phase(tid, x, from) else {
            self.dead = true;
            return Ok(StepResult::Rejected);
        };
        self.seen_ids.insert(id);
        self.commit_read(tid, from, hb_e, pred);
        Ok(StepResult::Accepted)
    }

    /// Append an RMW reading from write `from`; its write side extends
    /// `from`'s rf-chain.
    pub fn on_rmw(
        &mut self,
        id: EventId,
        tid: ThreadId,
        loc: &str,
        from: EventId,
    ) -> Result<StepResult, SessionError> {
        self.pre_admit(id, tid)?;
        let x = self.resolve_writer(loc, from)?;
        if self.consumed.contains_key(&from) {
            return Err(SessionError::WriterAlreadyConsumed { writer: from });
        }
        let Some((hb_e, pred)) = self.read_phase(tid, x, from) else {
            self.dead = true;
            return Ok(StepResult::Rejected);
        };
        self.seen_ids.insert(id);
        let (tc, pc) = {
            let w = &self.writes[&from];
            (w.tc, w.pc + 1)
        };
        self.commit_read(tid, from, hb_e.clone(), pred);
        // Write side: the event index was already bumped by the read phase.
        let idx = hb_e[tid];
        let mut clock = hb_e.clone();
        if let Some(prev) = self.last_write_before(tid, x, idx - 1) {
            let prev_tc = self.writes[&prev].tc;
            let c = self.hbmo[&prev_tc].clone();
            join(&mut clock, &c);
        }
        join(self.hbmo.get_mut(&tc).expect("chain exists"), &clock);
        self.writes.insert(id, WriteInfo { tid, idx, loc: x, tc, pc, hb: hb_e });
        self.write_lists.entry((tid, x)).or_default().push((idx, id));
        self.consumed.insert(from, id);
        self.po_propagate(tc);
        Ok(StepResult::Accepted)
    }

    /// Append a fence. Fences never synchronize under RA (every rf edge
    /// already does); they only occupy an event index.
    pub fn on_fence(&mut self, id: EventId, tid: ThreadId) -> Result<StepResult, SessionError> {
        self.pre_admit(id, tid)?;
        self.seen_ids.insert(id);
        self.h[tid][tid] += 1;
        Ok(StepResult::Accepted)
    }

    fn pre_admit(&self, id: EventId, tid: ThreadId) -> Result<(), SessionError> {
        if self.dead {
            return Err(SessionError::SessionDead);
        }
        if tid >= self.k {
            return Err(SessionError::BadThread { tid, k: self.k });
        }
        if id == 0 || self.seen_ids.contains(&id) {
            return Err(SessionError::DuplicateId(id));
        }
        Ok(())
    }

    fn resolve_writer(&self, loc: &str, from: EventId) -> Result<usize, SessionError> {
        let w = self.writes.get(&from).ok_or(SessionError::UnknownWriter(from))?;
        if self.locs[w.loc] != loc {
            return Err(SessionError::LocMismatch {
                writer: from,
                writer_loc: self.locs[w.loc].clone(),
                loc: loc.to_string(),
            });
        }
        Ok(w.loc)
    }

    fn intern_loc(&mut self, loc: &str) -> usize {
        if let Some(&i) = self.loc_index.get(loc) {
            return i;
        }
        let i = self.locs.len();
        self.locs.push(loc.to_string());
        self.loc_index.insert(loc.to_string(), i);
        i
    }

    /// Scratch phase of a read of `from` on `x` by thread `t`: returns the
    /// event's hb timestamp and the accumulated predecessor clock to merge
    /// into `from`'s chain, or `None` if the read is RA-inconsistent.
    fn read_phase(&self, t: ThreadId, x: usize, from: EventId) -> Option<(Vec<u32>, Vec<u32>)> {
        let w_rf = &self.writes[&from];
        let (rf_tc, rf_pc) = (w_rf.tc, w_rf.pc);
        let top = &self.writes[&rf_tc];
        let (top_tid, top_idx) = (top.tid, top.idx);

        let mut hb_e = self.h[t].clone();
        hb_e[t] += 1;
        join(&mut hb_e, &w_rf.hb);

        let mut pred = vec![0u32; self.k];
        // Visibility frontier at the read, then its transitive closure
        // through newly forced predecessors.
        let mut processed = vec![0u32; self.k];
        let mut frontier: Vec<u32> = hb_e.clone();
        frontier[t] -= 1; // the read itself is not a visible write
        loop {
            let mut changed = false;
            for u in 0..self.k {
                if frontier[u] <= processed[u] {
                    continue;
                }
                processed[u] = frontier[u];
                changed = true;
                let Some(w) = self.last_write_before(u, x, frontier[u]) else { continue };
                if w == from {
                    continue;
                }
                let info = &self.writes[&w];
                if info.tc == rf_tc {
                    if rf_pc < info.pc {
                        // A chain-later write is already visible: reading
                        // `from` is stale within its own block.
                        return None;
                    }
                    continue;
                }
                let clock = &self.hbmo[&info.tc];
                if clock[top_tid] >= top_idx {
                    // `from`'s block is already forced before w's block, yet
                    // w must go before `from`: an mo cycle.
                    return None;
                }
                join(&mut pred, clock);
                // Everything before w's block is before `from`'s block, and
                // therefore visible to later coherence checks here.
                for v in 0..self.k {
                    if pred[v] > frontier[v] {
                        frontier[v] = pred[v];
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Some((hb_e, pred))
    }

    fn commit_read(&mut self, t: ThreadId, from: EventId, hb_e: Vec<u32>, pred: Vec<u32>) {
        let rf_tc = self.writes[&from].tc;
        join(self.hbmo.get_mut(&rf_tc).expect("chain exists"), &pred);
        self.h[t] = hb_e;
        self.po_propagate(rf_tc);
    }

    /// Blocks are mo-contiguous, so everything before chain `c`'s block is
    /// also before the blocks of writes po-after `c`'s top on the same
    /// location. Forward `c`'s clock to them.
    fn po_propagate(&mut self, c: EventId) {
        let (tid, idx, loc) = {
            let top = &self.writes[&c];
            (top.tid, top.idx, top.loc)
        };
        let clock = self.hbmo[&c].clone();
        let Some(list) = self.write_lists.get(&(tid, loc)) else { return };
        let start = list.partition_point(|&(i, _)| i <= idx);
        let laters: Vec<EventId> = list[start..].iter().map(|&(_, id)| id).collect();
        for w in laters {
            let tc = self.writes[&w].tc;
            if tc != c {
                join(self.hbmo.get_mut(&tc).expect("chain exists"), &clock);
            }
        }
    }

    /// Last write-like of thread `u` on `x` with event index ≤ `cap`.
    fn last_write_before(&self, u: ThreadId, x: usize, cap: u32) -> Option<EventId> {
        let list = self.write_lists.get(&(u, x))?;
        let pos = list.partition_point(|&(idx, _)| idx <= cap);
        (pos > 0).then(|| list[pos - 1].1)
    }
}

fn join(a: &mut [u32], b: &[u32]) {
    for (x, y) in a.iter_mut().zip(b) {
        if *y > *x {
            *x = *y;
        }
    }
}

#[cfg(test)]
mod tests;
