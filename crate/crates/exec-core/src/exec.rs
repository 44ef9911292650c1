//! Partial executions and structural validation.

use crate::event::{Event, EventId, LocId, MemoryOrder, Op, ThreadId};
use rustc_hash::FxHashMap;
use std::collections::HashMap;

/// Input description of one event, before thread/idx placement and location
/// interning. Threads and program order come from the position of the spec in
/// the builder's per-thread lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSpec {
    pub id: EventId,
    pub op: Op,
    pub ord: MemoryOrder,
    /// Location name; must be `Some` iff the op is not a fence.
    pub loc: Option<String>,
}

impl EventSpec {
    pub fn write(id: EventId, loc: &str, ord: MemoryOrder) -> Self {
        EventSpec { id, op: Op::Write, ord, loc: Some(loc.to_string()) }
    }
    pub fn read(id: EventId, loc: &str, ord: MemoryOrder) -> Self {
        EventSpec { id, op: Op::Read, ord, loc: Some(loc.to_string()) }
    }
    pub fn rmw(id: EventId, loc: &str, ord: MemoryOrder) -> Self {
        EventSpec { id, op: Op::Rmw, ord, loc: Some(loc.to_string()) }
    }
    pub fn fence(id: EventId, ord: MemoryOrder) -> Self {
        EventSpec { id, op: Op::Fence, ord, loc: None }
    }
}

/// Structural validation failure; carries the offending event id where one
/// exists.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ValidateError {
    #[error("event {0}: duplicate id")]
    DuplicateId(EventId),
    #[error("event {0}: id must be positive")]
    NonPositiveId(EventId),
    #[error("event {reader}: dangling rf (writer {writer:?} unknown or missing)")]
    DanglingRf { reader: EventId, writer: Option<EventId> },
    #[error("rf ({writer} -> {reader}): location mismatch")]
    LocMismatch { writer: EventId, reader: EventId },
    #[error("rf ({writer} -> {reader}): writer is not a write/RMW or reader is not a read/RMW")]
    BadRfOps { writer: EventId, reader: EventId },
    #[error("rf: reader {reader} reads from itself")]
    SelfRf { reader: EventId },
    #[error("event {0}: illegal memory order for its operation")]
    BadMode(EventId),
    #[error("event {0}: fence with a location, or access without one")]
    BadLoc(EventId),
}

/// Events with per-thread program order plus a reads-from mapping; the checker
/// input. Immutable after construction; construction validates every
/// structural invariant.
#[derive(Debug, Clone)]
pub struct PartialExecution {
    threads: Vec<Vec<Event>>,
    /// reader id -> writer id; total on reads/RMWs.
    rf: FxHashMap<EventId, EventId>,
    /// Interned location names, dense LocId order (first appearance in
    /// thread/po order).
    locs: Vec<String>,
    by_id: FxHashMap<EventId, (ThreadId, usize)>,
    /// Hash-free id lookups for the common case of a compact id range:
    /// `id_index[id] = (tid, idx0)` and `rf_dense[id] = writer` (0 = none),
    /// both empty when ids are too sparse (then the maps above serve).
    id_index: Vec<(u32, u32)>,
    rf_dense: Vec<EventId>,
    /// writer id -> sorted reader ids.
    readers: FxHashMap<EventId, Vec<EventId>>,
    /// Per-location write/RMW ids, sorted by id (the oracle's enumeration
    /// order).
    writes_by_loc: Vec<Vec<EventId>>,
    /// Per-location read/RMW ids, sorted by id.
    reads_by_loc: Vec<Vec<EventId>>,
    n: usize,
}

impl PartialExecution {
    /// Validates and builds. `threads[t]` lists thread `t`'s events in program
    /// order; `rf` maps reader ids to writer ids.
    pub fn new(
        threads: Vec<Vec<EventSpec>>,
        rf: HashMap<EventId, EventId>,
    ) -> Result<Self, ValidateError> {
        let rf: FxHashMap<EventId, EventId> = rf.into_iter().collect();
        let mut locs: Vec<String> = Vec::new();
        let mut loc_ids: HashMap<String, LocId> = HashMap::new();
        let mut built: Vec<Vec<Event>> = Vec::with_capacity(threads.len());
        let mut by_id: FxHashMap<EventId, (ThreadId, usize)> = FxHashMap::default();
        let mut n = 0usize;

        for (tid, specs) in threads.into_iter().enumerate() {
            let mut thread = Vec::with_capacity(specs.len());
            for (i, s) in specs.into_iter().enumerate() {
                if s.id == 0 {
                    return Err(ValidateError::NonPositiveId(s.id));
                }
                if by_id.contains_key(&s.id) {
                    return Err(ValidateError::DuplicateId(s.id));
                }
                if !s.op.allows(s.ord) {
                    return Err(ValidateError::BadMode(s.id));
                }
                let loc = match (&s.loc, s.op) {
                    (None, Op::Fence) => None,
                    (Some(name), op) if op != Op::Fence => {
                        let next = locs.len();
                        let lid = *loc_ids.entry(name.clone()).or_insert_with(|| {
                            locs.push(name.clone());
                            next
                        });
                        Some(lid)
                    }
                    _ => return Err(ValidateError::BadLoc(s.id)),
                };
                by_id.insert(s.id, (tid, i));
                thread.push(Event { id: s.id, tid, idx: i + 1, op: s.op, ord: s.ord, loc });
                n += 1;
            }
            built.push(thread);
        }

        let event = |id: EventId| -> &Event {
            let (t, i) = by_id[&id];
            &built[t][i]
        };

        // rf totality and well-formedness.
        let mut readers: FxHashMap<EventId, Vec<EventId>> = FxHashMap::default();
        for t in &built {
            for e in t {
                if e.op.is_read_like() {
                    let w = match rf.get(&e.id) {
                        Some(&w) => w,
                        None => {
                            return Err(ValidateError::DanglingRf { reader: e.id, writer: None })
                        }
                    };
                    if w == e.id {
                        return Err(ValidateError::SelfRf { reader: e.id });
                    }
                    if !by_id.contains_key(&w) {
                        return Err(ValidateError::DanglingRf {
                            reader: e.id,
                            writer: Some(w),
                        });
                    }
                    let we = event(w);
                    if !we.op.is_write_like() {
                        return Err(ValidateError::BadRfOps { writer: w, reader: e.id });
                    }
                    if we.loc != e.loc {
                        return Err(ValidateError::LocMismatch { writer: w, reader: e.id });
                    }
                }
            }
        }
        for (&r, &w) in &rf {
            let re = match by_id.get(&r) {
                Some(&(t, i)) => &built[t][i],
                None => return Err(ValidateError::DanglingRf { reader: r, writer: Some(w) }),
            };
            if !re.op.is_read_like() {
                return Err(ValidateError::BadRfOps { writer: w, reader: r });
            }
            readers.entry(w).or_default().push(r);
        }
        for v in readers.values_mut() {
            v.sort_unstable();
        }

        let mut writes_by_loc = vec![Vec::new(); locs.len()];
        let mut reads_by_loc = vec![Vec::new(); locs.len()];
        for t in &built {
            for e in t {
                if let Some(l) = e.loc {
                    if e.op.is_write_like() {
                        writes_by_loc[l].push(e.id);
                    }
                    if e.op.is_read_like() {
                        reads_by_loc[l].push(e.id);
                    }
                }
            }
        }
        for v in writes_by_loc.iter_mut().chain(reads_by_loc.iter_mut()) {
            v.sort_unstable();
        }

        let max_id = by_id.keys().copied().max().unwrap_or(0);
        let (id_index, rf_dense) = if max_id as usize <= 4 * n.max(1) {
            let mut idx = vec![(u32::MAX, u32::MAX); max_id as usize + 1];
            for (&id, &(t, i)) in &by_id {
                idx[id as usize] = (t as u32, i as u32);
            }
            let mut rfd = vec![0; max_id as usize + 1];
            for (&r, &w) in &rf {
                rfd[r as usize] = w;
            }
            (idx, rfd)
        } else {
            (Vec::new(), Vec::new())
        };

        Ok(PartialExecution {
            threads: built,
            rf,
            locs,
            by_id,
            id_index,
            rf_dense,
            readers,
            writes_by_loc,
            reads_by_loc,
            n,
        })
    }

    /// Total event count.
    pub fn num_events(&self) -> usize {
        self.n
    }

    /// Thread count `k`.
    pub fn num_threads(&self) -> usize {
        self.threads.len()
    }

    /// Distinct location count.
    pub fn num_locs(&self) -> usize {
        self.locs.len()
    }

    /// Interned name of a location.
    pub fn loc_name(&self, l: LocId) -> &str {
        &self.locs[l]
    }

    /// Thread `t`'s events in program order.
    #[inline]
    pub fn thread(&self, t: ThreadId) -> &[Event] {
        &self.threads[t]
    }

    /// Event lookup by id; panics on unknown ids (validated input only refers
    /// to known ids).
    #[inline]
    pub fn event(&self, id: EventId) -> &Event {
        if !self.id_index.is_empty() {
            let (t, i) = self.id_index[id as usize];
            return &self.threads[t as usize][i as usize];
        }
        let (t, i) = self.by_id[&id];
        &self.threads[t][i]
    }

    /// `(tid, po index)` of an event, 0-based; panics on unknown ids. A
    /// cheaper lookup than [`Self::event`] for coordinate-only callers.
    #[inline]
    pub fn coords(&self, id: EventId) -> (ThreadId, usize) {
        if !self.id_index.is_empty() {
            let (t, i) = self.id_index[id as usize];
            return (t as usize, i as usize);
        }
        self.by_id[&id]
    }

    /// `Some(bound)` with all event ids `< bound` when the id range is
    /// compact enough for flat side tables, else `None`.
    pub(crate) fn compact_id_bound(&self) -> Option<usize> {
        if self.id_index.is_empty() { None } else { Some(self.id_index.len()) }
    }

    /// True iff `id` names an event of this execution.
    pub fn has_event(&self, id: EventId) -> bool {
        if !self.id_index.is_empty() {
            return (id as usize) < self.id_index.len() && self.id_index[id as usize].0 != u32::MAX;
        }
        self.by_id.contains_key(&id)
    }

    /// All events, thread by thread in program order.
    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.threads.iter().flatten()
    }

    /// The unique writer of read/RMW `r`, if `r` is a reader.
    #[inline]
    pub fn writer_of(&self, r: EventId) -> Option<EventId> {
        if !self.rf_dense.is_empty() {
            return match self.rf_dense.get(r as usize) {
                Some(&w) if w != 0 => Some(w),
                _ => None,
            };
        }
        self.rf.get(&r).copied()
    }

    /// Sorted reader ids of write/RMW `w` (possibly empty).
    pub fn readers_of(&self, w: EventId) -> &[EventId] {
        self.readers.get(&w).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The rf map (reader -> writer).
    pub fn rf(&self) -> &FxHashMap<EventId, EventId> {
        &self.rf
    }

    /// Write/RMW ids on `loc`, sorted by event id.
    pub fn writes_on(&self, loc: LocId) -> &[EventId] {
        &self.writes_by_loc[loc]
    }

    /// Read/RMW ids on `loc`, sorted by event id.
    pub fn reads_on(&self, loc: LocId) -> &[EventId] {
        &self.reads_by_loc[loc]
    }

    /// Copy with every event's mode rewritten by `f` (op is preserved).
    /// Used for fragment strengthening/demotion; panics if `f` returns an
    /// illegal mode for an op.
    pub fn map_modes(&self, f: impl Fn(Op, MemoryOrder) -> MemoryOrder) -> PartialExecution {
        // Modes don't participate in any structural invariant, so a field
        // rewrite is equivalent to rebuilding through `new` but skips
        // revalidation.
        let mut out = self.clone();
        for t in &mut out.threads {
            for e in t {
                let ord = f(e.op, e.ord);
                assert!(e.op.allows(ord), "mode map produced an illegal mode for event {}", e.id);
                e.ord = ord;
            }
        }
        out
    }
}
