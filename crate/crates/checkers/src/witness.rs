//! §5.6: completing a minimally coherent partial m̄o into a total witness mo.
//! Maximal rf-chains are the units: atomicity forces each chain to be an
//! mo-contiguous block, so it suffices to order chains pairwise and read the
//! totalisation off a topological sort.

use crate::coherence::rc20_minimally_coherent;
use exec_core::{EventId, ModificationOrder, PartialExecution};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

/// The supplied partial mo does not satisfy the RC20 minimal-coherence
/// conditions, so no coherence-preserving completion is guaranteed to exist.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("partial mo is not minimally coherent for RC20")]
pub struct NotMinimallyCoherent;

/// Extend a minimally coherent partial m̄o of `x` into a total, per-location
/// witness mo under which `x` satisfies the RC20 axioms. Deterministic: ties
/// between unordered chains are broken towards the chain with the smaller
/// top event id.
pub fn complete_witness_rc20(
    x: &PartialExecution,
    pm: &ModificationOrder,
) -> Result<ModificationOrder, NotMinimallyCoherent> {
    if !rc20_minimally_coherent(x, pm) {
        return Err(NotMinimallyCoherent);
    }
    let hb = crate::coherence::hb_table(x).ok_or(NotMinimallyCoherent)?;
    let chains = exec_core::build_rf_chains(x).map_err(|_| NotMinimallyCoherent)?;
    let mut witness = ModificationOrder::empty_total();

    for loc in 0..x.num_locs() {
        let writes: Vec<EventId> = x.writes_on(loc).to_vec();
        if writes.is_empty() {
            witness.set_sequence(loc, Vec::new());
            continue;
        }
        // Working graph over the location's write-likes: rf-chain successor
        // edges, the partial m̄o, and hb edges between writes (forced into
        // any mo by write coherence).
        let mut succ: HashMap<EventId, Vec<EventId>> = HashMap::new();
        let mut chain_members: HashMap<EventId, Vec<EventId>> = HashMap::new();
        for &w in &writes {
            chain_members.entry(chains.tc(w)).or_default().push(w);
        }
        for members in chain_members.values_mut() {
            members.sort_by_key(|&w| chains.pc(w));
            for pair in members.windows(2) {
                succ.entry(pair[0]).or_default().push(pair[1]);
            }
        }
        for (a, b) in pm.pairs_on(loc) {
            succ.entry(a).or_default().push(b);
        }
        for &a in &writes {
            for &b in &writes {
                if a != b && hb.hb_before(x.event(a), x.event(b)) {
                    succ.entry(a).or_default().push(b);
                }
            }
        }

        // Order every pair of maximal chains: chain A precedes B iff
        // bottom(A) reaches top(B). Insert missing orderings, smaller top
        // id first unless that closes a cycle.
        let mut tops: Vec<EventId> = chain_members.keys().copied().collect();
        tops.sort_unstable();
        let bottom = |t: EventId| *chain_members[&t].last().expect("chain is nonempty");
        loop {
            let mut inserted = false;
            for i in 0..tops.len() {
                for j in (i + 1)..tops.len() {
                    let (a, b) = (tops[i], tops[j]);
                    if reaches(&succ, bottom(a), b) || reaches(&succ, bottom(b), a) {
                        continue;
                    }
                    if reaches(&succ, b, bottom(a)) {
                        succ.entry(bottom(b)).or_default().push(a);
                    } else {
                        succ.entry(bottom(a)).or_default().push(b);
                    }
                    inserted = true;
                }
            }
            if !inserted {
                break;
            }
        }

        // Totalise: deterministic topological sort of the write graph.
        let seq = toposort_writes(&succ, &writes).ok_or(NotMinimallyCoherent)?;
        witness.set_sequence(loc, seq);
    }
    Ok(witness)
}

fn reaches(succ: &HashMap<EventId, Vec<EventId>>, from: EventId, to: EventId) -> bool {
    if from == to {
        return true;
    }
    let mut seen = HashSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(a) = queue.pop_front() {
        for &b in succ.get(&a).into_iter().flatten() {
            if b == to {
                return true;
            }
            if seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    false
}

fn toposort_writes(
    succ: &HashMap<EventId, Vec<EventId>>,
    writes: &[EventId],
) -> Option<Vec<EventId>> {
    let set: HashSet<EventId> = writes.iter().copied().collect();
    let mut indeg: HashMap<EventId, usize> = writes.iter().map(|&w| (w, 0)).collect();
    for (&a, bs) in succ {
        if !set.contains(&a) {
            continue;
        }
        for b in bs {
            if let Some(d) = indeg.get_mut(b) {
                *d += 1;
            }
        }
    }
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<EventId>> = writes
        .iter()
        .filter(|w| indeg[w] == 0)
        .map(|&w| std::cmp::Reverse(w))
        .collect();
    let mut out = Vec::with_capacity(writes.len());
    while let Some(std::cmp::Reverse(a)) = ready.pop() {
        out.push(a);
        for &b in succ.get(&a).into_iter().flatten() {
            if let Some(d) = indeg.get_mut(&b) {
                *d -= 1;
                if *d == 0 {
                    ready.push(std::cmp::Reverse(b));
                }
            }
        }
    }
    (out.len() == writes.len()).then_some(out)
}
