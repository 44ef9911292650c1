//! The paper's five consistency-checking algorithms over partial executions.
//!
//! Each checker returns a [`Verdict`]: `Consistent` with a minimally coherent
//! partial mo (where the model is mo-based), or `Inconsistent` with a
//! machine-readable reason naming concrete events.
//!
//! Fragment conventions (shared with the oracle): WRA/SRA/RA strengthen all
//! accesses into rel/acq before checking, so their hb is `(po ∪ rf)⁺`;
//! Relaxed treats every access as rlx, so its hb is po; RC20 alone is
//! mode-sensitive and uses the hb-engine timestamps as computed.

mod graph;
mod coherence;
mod rc20;
mod relaxed;
mod sra;
mod witness;
mod wra;

pub use coherence::{rc20_minimally_coherent, relaxed_minimally_coherent, sra_minimally_coherent};
pub use rc20::{check_ra, check_rc20};
pub use relaxed::check_relaxed;
pub use sra::{check_sra_full, check_sra_normw, SraSearchConfig, DEFAULT_SRA_NODE_CAP};
pub use witness::{complete_witness_rc20, NotMinimallyCoherent};
pub use wra::check_wra;

use exec_core::{EventId, ModificationOrder};

/// Machine-readable cause of an `Inconsistent` verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    /// po ∪ rf has a cycle (event ids along the cycle).
    PorfCycle { cycle: Vec<EventId> },
    /// Two RMWs share a writer.
    WeakAtomicity { rmw1: EventId, rmw2: EventId, writer: EventId },
    /// A write/RMW is hb-sandwiched between a reader's writer and the reader.
    WeakReadCoherence { read: EventId, writer: EventId, sandwiched: EventId },
    /// The per-location (or, for SRA, global hb ∪ m̄o) graph has a cycle.
    /// `loc` is the location name for per-location cycles, `None` for the
    /// global SRA graph.
    MoCycle { loc: Option<String>, cycle: Vec<EventId> },
    /// The full-SRA search exhausted all downward-closed sets without
    /// reaching the complete execution.
    SraStuck { explored: usize },
}

impl Reason {
    /// Stable one-word tag for CLI output.
    pub fn tag(&self) -> &'static str {
        match self {
            Reason::PorfCycle { .. } => "PorfCycle",
            Reason::WeakAtomicity { .. } => "WeakAtomicity",
            Reason::WeakReadCoherence { .. } => "WeakReadCoherence",
            Reason::MoCycle { .. } => "MoCycle",
            Reason::SraStuck { .. } => "SraStuck",
        }
    }
}

/// Outcome of a consistency check.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub consistent: bool,
    /// Minimally coherent m̄o (Consistent verdicts of mo-based models).
    pub partial_mo: Option<ModificationOrder>,
    /// Total witness, where the checker produces one cheaply (SRA paths and
    /// Algorithm 1's linear extension); RC20 witnesses come from
    /// [`complete_witness_rc20`].
    pub witness_mo: Option<ModificationOrder>,
    pub reason: Option<Reason>,
}

impl Verdict {
    fn consistent(partial_mo: Option<ModificationOrder>) -> Self {
        Verdict { consistent: true, partial_mo, witness_mo: None, reason: None }
    }

    fn inconsistent(reason: Reason) -> Self {
        Verdict { consistent: false, partial_mo: None, witness_mo: None, reason: Some(reason) }
    }
}

/// Caller errors (distinct from inconsistency verdicts).
#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("execution contains RMW events; use check_sra_full")]
    RmwPresent,
    #[error("SRA search exceeded the node cap ({cap} nodes explored)")]
    StateLimit { cap: usize },
}

#[cfg(test)]
mod tests;
