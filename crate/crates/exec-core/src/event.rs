//! Event-level vocabulary: memory orders, operation kinds, and events.

use std::fmt;

/// Unique positive event identifier, supplied by the trace.
pub type EventId = u64;

/// Dense 0-based thread identifier.
pub type ThreadId = usize;

/// Interned location identifier, dense per execution.
pub type LocId = usize;

/// C11-style memory order, partially ordered on increasing strength:
/// `rlx ⊏ acq`, `rlx ⊏ rel`, `acq ⊏ acqrel`, `rel ⊏ acqrel`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MemoryOrder {
    Rlx,
    Acq,
    Rel,
    AcqRel,
}

impl MemoryOrder {
    /// `⊒ rel`: rel or acqrel.
    pub fn is_release(self) -> bool {
        matches!(self, MemoryOrder::Rel | MemoryOrder::AcqRel)
    }

    /// `⊒ acq`: acq or acqrel.
    pub fn is_acquire(self) -> bool {
        matches!(self, MemoryOrder::Acq | MemoryOrder::AcqRel)
    }

    /// Canonical lowercase keyword (trace syntax).
    pub fn as_str(self) -> &'static str {
        match self {
            MemoryOrder::Rlx => "rlx",
            MemoryOrder::Acq => "acq",
            MemoryOrder::Rel => "rel",
            MemoryOrder::AcqRel => "acqrel",
        }
    }
}

impl fmt::Display for MemoryOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Operation kind. Failed RMWs are not distinct: traces encode them as reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Write,
    Read,
    Rmw,
    Fence,
}

impl Op {
    /// Writes and RMWs: the events a location's modification order ranges over.
    pub fn is_write_like(self) -> bool {
        matches!(self, Op::Write | Op::Rmw)
    }

    /// Reads and RMWs: the events rf is total on.
    pub fn is_read_like(self) -> bool {
        matches!(self, Op::Read | Op::Rmw)
    }

    /// True iff `ord` is a legal memory order for this operation.
    /// Reads never carry rel; writes never carry acq; fences are never rlx.
    pub fn allows(self, ord: MemoryOrder) -> bool {
        match self {
            Op::Write => matches!(ord, MemoryOrder::Rlx | MemoryOrder::Rel),
            Op::Read => matches!(ord, MemoryOrder::Rlx | MemoryOrder::Acq),
            Op::Rmw => true,
            Op::Fence => !matches!(ord, MemoryOrder::Rlx),
        }
    }
}

/// A single event of a partial execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    /// Unique positive identifier.
    pub id: EventId,
    /// Owning thread.
    pub tid: ThreadId,
    /// 1-based position within its thread (program-order index).
    pub idx: usize,
    pub op: Op,
    pub ord: MemoryOrder,
    /// Interned location; `None` iff `op == Fence`.
    pub loc: Option<LocId>,
}
