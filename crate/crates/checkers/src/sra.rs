//! §5.2/§5.3: SRA checking — Algorithm 1 for the RMW-free fragment (O(n·k))
//! and the downward-closed-set search for the general case (O(k·n^{k+1})).

use crate::graph::CycleGraph;
use crate::{CheckError, Reason, Verdict};
use exec_core::{EventId, ModificationOrder, PartialExecution, ThreadId};
use hb_engine::{HbTimestampTable, ObserverLists};
use std::collections::{HashMap, HashSet, VecDeque};

/// Algorithm 1: RMW-free SRA. Builds m̄o from per-thread frontier writes and
/// decides consistency as acyclicity of hb ∪ m̄o (hb = (po ∪ rf)⁺ after
/// strengthening). Consistent verdicts carry the m̄o and a total witness (a
/// linear extension of hb ∪ m̄o restricted per location).
pub fn check_sra_normw(x: &PartialExecution) -> Result<Verdict, CheckError> {
    if x.events().any(|e| e.op == exec_core::Op::Rmw) {
        return Err(CheckError::RmwPresent);
    }
    let xs = x;
    let (_, dense_order) = match exec_core::relations::porf_topo_order_dense(xs) {
        Ok(o) => o,
        Err(cycle) => return Ok(Verdict::inconsistent(Reason::PorfCycle { cycle })),
    };
    let hb = hb_engine::compute_hb_porf_dense_order(xs, &dense_order);
    let mut lists = ObserverLists::new(xs);
    let k = xs.num_threads();

    let mut mo_bar = ModificationOrder::empty_partial();
    for t in 0..k {
        for e in xs.thread(t) {
            if !e.op.is_read_like() {
                continue;
            }
            let loc = e.loc.expect("reader has a location");
            let w_rf = xs.writer_of(e.id).expect("reader has writer");
            let row = hb.row(e);
            for u in 0..k {
                let c = if u == t { e.idx as u32 - 1 } else { row[u] };
                let w_u = lists
                    .last_write_before(u, loc, c, t)
                    .expect("po-ordered queries are monotone");
                if let Some(w_u) = w_u {
                    if w_u != w_rf {
                        mo_bar.insert_pair(loc, w_u, w_rf);
                    }
                }
            }
        }
    }

    // Global acyclicity of hb ∪ m̄o over all events: immediate-po + rf edges
    // generate hb; m̄o pairs complete the graph.
    let ids: Vec<EventId> = xs.events().map(|e| e.id).collect();
    let mut g = CycleGraph::new(ids);
    for (a, b) in exec_core::relations::po_immediate(&xs) {
        g.add_edge(a, b);
    }
    for (&r, &w) in xs.rf() {
        g.add_edge(w, r);
    }
    for (a, b) in mo_bar.all_pairs() {
        g.add_edge(a, b);
    }
    match g.toposort() {
        Err(cycle) => Ok(Verdict::inconsistent(Reason::MoCycle { loc: None, cycle })),
        Ok(order) => {
            // Witness: the linear extension restricted per location.
            let mut witness = ModificationOrder::empty_total();
            for loc in 0..xs.num_locs() {
                let on_loc: HashSet<EventId> = xs.writes_on(loc).iter().copied().collect();
                let seq: Vec<EventId> =
                    order.iter().copied().filter(|id| on_loc.contains(id)).collect();
                witness.set_sequence(loc, seq);
            }
            let mut v = Verdict::consistent(Some(mo_bar));
            v.witness_mo = Some(witness);
            Ok(v)
        }
    }
}

/// Search configuration for [`check_sra_full`].
#[derive(Debug, Clone, Copy)]
pub struct SraSearchConfig {
    /// Maximum distinct downward-closed sets to explore before giving up
    /// with [`CheckError::StateLimit`].
    pub node_cap: usize,
}

/// Default node cap: 5·10⁶ explored sets.
pub const DEFAULT_SRA_NODE_CAP: usize = 5_000_000;

impl Default for SraSearchConfig {
    fn default() -> Self {
        SraSearchConfig { node_cap: DEFAULT_SRA_NODE_CAP }
    }
}

/// §5.2 full SRA: BFS over hb-downward-closed sets (canonically per-thread
/// prefix vectors), expanding only executable events. A write/RMW `e` must
/// additionally be *enabled*: (a) every `w′` of a triplet `(e, r, w′)` with
/// `(w′, r) ∈ hb` is already executed, and (b) no triplet `(w′, rmw, e)` has
/// `rmw` pending while `w′` is executed. Consistent iff the full vector is
/// reachable; the witness mo is the write execution order along the
/// accepting path.
pub fn check_sra_full(
    x: &PartialExecution,
    config: SraSearchConfig,
) -> Result<Verdict, CheckError> {
    let xs = x;
    if let Err(cycle) = exec_core::relations::porf_topo_order(xs) {
        return Ok(Verdict::inconsistent(Reason::PorfCycle { cycle }));
    }
    let hb = hb_engine::compute_hb_porf(xs).expect("porf acyclicity checked");
    let k = xs.num_threads();
    let search = SraSearch::new(xs, &hb);

    let root: Vec<u16> = vec![0; k];
    let goal: Vec<u16> = (0..k).map(|t| xs.thread(t).len() as u16).collect();
    if root == goal {
        return Ok(Verdict::consistent(Some(ModificationOrder::empty_partial())));
    }

    let mut visited: HashSet<Vec<u16>> = HashSet::from([root.clone()]);
    let mut parent: HashMap<Vec<u16>, (Vec<u16>, EventId)> = HashMap::new();
    let mut queue: VecDeque<Vec<u16>> = VecDeque::from([root]);
    while let Some(node) = queue.pop_front() {
        // Ascending thread id: reproducible accepting paths.
        for t in 0..k {
            let next_idx = node[t] as usize;
            if next_idx >= xs.thread(t).len() {
                continue;
            }
            let e = &xs.thread(t)[next_idx];
            if !search.executable(e.id, &node) {
                continue;
            }
            let mut succ = node.clone();
            succ[t] += 1;
            if visited.contains(&succ) {
                continue;
            }
            visited.insert(succ.clone());
            parent.insert(succ.clone(), (node.clone(), e.id));
            if succ == goal {
                return Ok(accepting_verdict(&xs, &parent, succ));
            }
            if visited.len() > config.node_cap {
                return Err(CheckError::StateLimit { cap: config.node_cap });
            }
            queue.push_back(succ);
        }
    }
    Ok(Verdict::inconsistent(Reason::SraStuck { explored: visited.len() }))
}

fn accepting_verdict(
    xs: &PartialExecution,
    parent: &HashMap<Vec<u16>, (Vec<u16>, EventId)>,
    goal: Vec<u16>,
) -> Verdict {
    let mut path = Vec::new();
    let mut cur = goal;
    while let Some((prev, id)) = parent.get(&cur) {
        path.push(*id);
        cur = prev.clone();
    }
    path.reverse();
    let mut witness = ModificationOrder::empty_total();
    for loc in 0..xs.num_locs() {
        let on_loc: HashSet<EventId> = xs.writes_on(loc).iter().copied().collect();
        witness.set_sequence(
            loc,
            path.iter().copied().filter(|id| on_loc.contains(id)).collect(),
        );
    }
    // The path's per-location order doubles as the (total) m̄o fragment.
    let mut v = Verdict::consistent(None);
    v.witness_mo = Some(witness);
    v
}

/// Precomputed executability machinery for one search.
struct SraSearch<'a> {
    xs: &'a PartialExecution,
    hb: &'a HbTimestampTable,
    /// (thread, loc) -> write/RMW (idx, id) list in po order.
    write_lists: HashMap<(ThreadId, usize), Vec<(u32, EventId)>>,
    /// loc -> RMW ids.
    rmws_by_loc: Vec<Vec<EventId>>,
}

impl<'a> SraSearch<'a> {
    fn new(xs: &'a PartialExecution, hb: &'a HbTimestampTable) -> Self {
        let mut write_lists: HashMap<(ThreadId, usize), Vec<(u32, EventId)>> = HashMap::new();
        let mut rmws_by_loc = vec![Vec::new(); xs.num_locs()];
        for t in 0..xs.num_threads() {
            for e in xs.thread(t) {
                if e.op.is_write_like() {
                    let loc = e.loc.expect("write has a location");
                    write_lists.entry((t, loc)).or_default().push((e.idx as u32, e.id));
                    if e.op == exec_core::Op::Rmw {
                        rmws_by_loc[loc].push(e.id);
                    }
                }
            }
        }
        SraSearch { xs, hb, write_lists, rmws_by_loc }
    }

    fn in_set(&self, id: EventId, node: &[u16]) -> bool {
        let e = self.xs.event(id);
        e.idx as u16 <= node[e.tid]
    }

    fn executable(&self, id: EventId, node: &[u16]) -> bool {
        let e = self.xs.event(id);
        // (1) hb-predecessors already in the set.
        for u in 0..self.xs.num_threads() {
            if u != e.tid && self.hb.get(id, u) > node[u] as u32 {
                return false;
            }
        }
        if !e.op.is_write_like() {
            return true;
        }
        let loc = e.loc.expect("write has a location");
        // (2a) for every reader r of e and thread u: the last write of u on
        // loc hb-before r (excluding e and r themselves) must be executed.
        for &r in self.xs.readers_of(id) {
            for u in 0..self.xs.num_threads() {
                let Some(list) = self.write_lists.get(&(u, loc)) else { continue };
                let horizon = self.hb.get(r, u);
                let mut pos = list.partition_point(|&(idx, _)| idx <= horizon);
                while pos > 0 {
                    let (idx, w2) = list[pos - 1];
                    if w2 == id || w2 == r {
                        pos -= 1;
                        continue;
                    }
                    if idx > node[u] as u32 {
                        return false;
                    }
                    break;
                }
            }
        }
        // (2b) no pending RMW on loc whose writer is already executed: e
        // would intrude mo-between them.
        for &m in &self.rmws_by_loc[loc] {
            if m == id || self.in_set(m, node) {
                continue;
            }
            let w2 = self.xs.writer_of(m).expect("rmw has writer");
            if w2 != id && self.in_set(w2, node) {
                return false;
            }
        }
        true
    }
}
