//! Per-location modification orders, total (full witness) or partial
//! (minimal-coherence fragment).

use crate::event::{EventId, LocId};
use crate::exec::PartialExecution;
use std::collections::{BTreeMap, BTreeSet};

/// Per-location orders over write/RMW events.
///
/// The total form stores one sequence per location containing every write/RMW
/// on that location exactly once. The partial form stores a set of ordered
/// pairs per location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModificationOrder {
    Total(BTreeMap<LocId, Vec<EventId>>),
    Partial(BTreeMap<LocId, BTreeSet<(EventId, EventId)>>),
}

impl ModificationOrder {
    pub fn empty_total() -> Self {
        ModificationOrder::Total(BTreeMap::new())
    }

    pub fn empty_partial() -> Self {
        ModificationOrder::Partial(BTreeMap::new())
    }

    pub fn is_total(&self) -> bool {
        matches!(self, ModificationOrder::Total(_))
    }

    /// The ordered pairs the order denotes on `loc` (transitively closed for
    /// the total form, literal pairs for the partial form).
    pub fn pairs_on(&self, loc: LocId) -> Vec<(EventId, EventId)> {
        match self {
            ModificationOrder::Total(m) => {
                let mut out = Vec::new();
                if let Some(seq) = m.get(&loc) {
                    for i in 0..seq.len() {
                        for j in i + 1..seq.len() {
                            out.push((seq[i], seq[j]));
                        }
                    }
                }
                out
            }
            ModificationOrder::Partial(m) => {
                m.get(&loc).map(|s| s.iter().copied().collect()).unwrap_or_default()
            }
        }
    }

    /// All pairs over all locations.
    pub fn all_pairs(&self) -> Vec<(EventId, EventId)> {
        let locs: Vec<LocId> = match self {
            ModificationOrder::Total(m) => m.keys().copied().collect(),
            ModificationOrder::Partial(m) => m.keys().copied().collect(),
        };
        locs.into_iter().flat_map(|l| self.pairs_on(l)).collect()
    }

    /// Total sequence on `loc` (empty if absent). Panics on the partial form.
    pub fn sequence_on(&self, loc: LocId) -> &[EventId] {
        match self {
            ModificationOrder::Total(m) => m.get(&loc).map(Vec::as_slice).unwrap_or(&[]),
            ModificationOrder::Partial(_) => panic!("sequence_on on a partial mo"),
        }
    }

    /// Inserts a pair into the partial form (no-op for duplicates). Panics on
    /// the total form.
    pub fn insert_pair(&mut self, loc: LocId, a: EventId, b: EventId) {
        match self {
            ModificationOrder::Partial(m) => {
                m.entry(loc).or_default().insert((a, b));
            }
            ModificationOrder::Total(_) => panic!("insert_pair on a total mo"),
        }
    }

    /// Sets the total sequence of `loc`. Panics on the partial form.
    pub fn set_sequence(&mut self, loc: LocId, seq: Vec<EventId>) {
        match self {
            ModificationOrder::Total(m) => {
                m.insert(loc, seq);
            }
            ModificationOrder::Partial(_) => panic!("set_sequence on a partial mo"),
        }
    }

    /// Checks the type invariants against `x`: pairs relate distinct
    /// write/RMWs of one location; total sequences are exact permutations of
    /// the location's writes; partial pair sets are acyclic per location.
    pub fn validate_against(&self, x: &PartialExecution) -> bool {
        let write_like = |id: EventId, loc: LocId| {
            x.has_event(id) && x.event(id).op.is_write_like() && x.event(id).loc == Some(loc)
        };
        match self {
            ModificationOrder::Total(m) => m.iter().all(|(&loc, seq)| {
                let mut sorted = seq.clone();
                sorted.sort_unstable();
                sorted.dedup();
                sorted.len() == seq.len()
                    && sorted == x.writes_on(loc)
                    && seq.iter().all(|&w| write_like(w, loc))
            }),
            ModificationOrder::Partial(m) => m.iter().all(|(&loc, pairs)| {
                pairs
                    .iter()
                    .all(|&(a, b)| a != b && write_like(a, loc) && write_like(b, loc))
                    && acyclic(pairs)
            }),
        }
    }
}

fn acyclic(pairs: &BTreeSet<(EventId, EventId)>) -> bool {
    use std::collections::HashMap;
    let mut succ: HashMap<EventId, Vec<EventId>> = HashMap::new();
    let mut indeg: HashMap<EventId, usize> = HashMap::new();
    for &(a, b) in pairs {
        succ.entry(a).or_default().push(b);
        *indeg.entry(b).or_insert(0) += 1;
        indeg.entry(a).or_insert(0);
    }
    let mut queue: Vec<EventId> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&v, _)| v)
        .collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &w in succ.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            let d = indeg.get_mut(&w).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push(w);
            }
        }
    }
    seen == indeg.len()
}
