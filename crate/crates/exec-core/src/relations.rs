//! Derived relations (sw, hb, hbloc, fr) as explicit pair sets, plus po ∪ rf
//! topological ordering.
//!
//! These materializations are oracle-grade: quadratic/cubic in event count and
//! intended for small instances and differential testing. The O(n·k) checkers
//! use the hb-engine vector timestamps instead.

use crate::event::{EventId, Op};
use crate::exec::PartialExecution;
use crate::mo::ModificationOrder;
use std::collections::{BinaryHeap, HashMap, HashSet};

/// A binary relation over event ids, stored as an explicit pair set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Relation {
    pairs: HashSet<(EventId, EventId)>,
}

impl Relation {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (EventId, EventId)>) -> Self {
        Relation { pairs: pairs.into_iter().collect() }
    }

    pub fn contains(&self, a: EventId, b: EventId) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn iter(&self) -> impl Iterator<Item = (EventId, EventId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn insert(&mut self, a: EventId, b: EventId) {
        self.pairs.insert((a, b));
    }

    /// Transitive closure of this relation (not reflexive).
    pub fn closure(&self) -> Relation {
        let mut succ: HashMap<EventId, Vec<EventId>> = HashMap::new();
        let mut nodes: HashSet<EventId> = HashSet::new();
        for &(a, b) in &self.pairs {
            succ.entry(a).or_default().push(b);
            nodes.insert(a);
            nodes.insert(b);
        }
        let mut out = HashSet::new();
        for &start in &nodes {
            let mut stack: Vec<EventId> =
                succ.get(&start).map(|v| v.clone()).unwrap_or_default();
            let mut seen: HashSet<EventId> = HashSet::new();
            while let Some(v) = stack.pop() {
                if !seen.insert(v) {
                    continue;
                }
                out.insert((start, v));
                if let Some(next) = succ.get(&v) {
                    stack.extend(next.iter().copied());
                }
            }
        }
        Relation { pairs: out }
    }

    /// True iff the relation, viewed as a digraph, has no cycle.
    pub fn acyclic(&self) -> bool {
        let closed = self.closure();
        closed.pairs.iter().all(|&(a, b)| a != b)
    }
}

/// The derived-relation bundle of an execution under a total mo.
#[derive(Debug, Clone)]
pub struct RelationBundle {
    /// synchronizes-with: `[E⊒rel];([F];po)?;rf⁺;(po;[F])?;[E⊒acq]`.
    pub sw: Relation,
    /// happens-before, transitively closed: `(po ∪ sw)⁺`.
    pub hb: Relation,
    /// per-location restriction of hb (both events access the same location).
    pub hbloc: Relation,
    /// from-read: `(rf⁻¹;mo) \ id`.
    pub fr: Relation,
}

/// Which happens-before the bundle should realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbMode {
    /// sw per the quoted RC20 composition, hb = (po ∪ sw)⁺.
    ModeAware,
    /// hb = po (the rlx-only fragment's hb); sw is left empty.
    PoOnly,
}

/// Immediate program-order edges (thread-successor pairs).
pub fn po_immediate(x: &PartialExecution) -> Vec<(EventId, EventId)> {
    let mut out = Vec::new();
    for t in 0..x.num_threads() {
        let evs = x.thread(t);
        for w in evs.windows(2) {
            out.push((w[0].id, w[1].id));
        }
    }
    out
}

/// Full program order as a closed relation.
pub fn po_relation(x: &PartialExecution) -> Relation {
    Relation::from_pairs(po_immediate(x)).closure()
}

/// Derives sw/hb/hbloc/fr with the mode-aware hb of the paper's §2.
pub fn derive_relations(x: &PartialExecution, mo: &ModificationOrder) -> RelationBundle {
    derive_relations_with(x, mo, HbMode::ModeAware)
}

/// Derives the bundle for a chosen hb flavor; `PoOnly` is the Relaxed model's
/// hb = po.
pub fn derive_relations_with(
    x: &PartialExecution,
    mo: &ModificationOrder,
    mode: HbMode,
) -> RelationBundle {
    let sw = match mode {
        HbMode::ModeAware => compute_sw(x),
        HbMode::PoOnly => Relation::default(),
    };
    let mut hb_edges: Vec<(EventId, EventId)> = po_immediate(x);
    hb_edges.extend(sw.iter());
    let hb = Relation::from_pairs(hb_edges).closure();

    let mut hbloc = Relation::default();
    for (a, b) in hb.iter() {
        let (ea, eb) = (x.event(a), x.event(b));
        if ea.loc.is_some() && ea.loc == eb.loc {
            hbloc.insert(a, b);
        }
    }

    let fr = compute_fr(x, mo);
    RelationBundle { sw, hb, hbloc, fr }
}

/// fr = (rf⁻¹;mo) \ id: relates each reader to every write mo-after its
/// writer. Total mo only (partial mos contribute their literal pairs).
pub fn compute_fr(x: &PartialExecution, mo: &ModificationOrder) -> Relation {
    let mut mo_succ: HashMap<EventId, Vec<EventId>> = HashMap::new();
    for (a, b) in mo.all_pairs() {
        mo_succ.entry(a).or_default().push(b);
    }
    let mut fr = Relation::default();
    for e in x.events() {
        if !e.op.is_read_like() {
            continue;
        }
        let w = x.writer_of(e.id).expect("reader has writer");
        for &w2 in mo_succ.get(&w).map(Vec::as_slice).unwrap_or(&[]) {
            if w2 != e.id {
                fr.insert(e.id, w2);
            }
        }
    }
    fr
}

/// Evaluates the sw composition literally.
fn compute_sw(x: &PartialExecution) -> Relation {
    // rf as forward adjacency for rf⁺ chasing.
    let mut sw = Relation::default();
    for a in x.events() {
        if !a.ord.is_release() {
            continue;
        }
        // The [E⊒rel] head: a itself if write-like, or (for a fence) every
        // write-like event po-after it in its thread.
        let mut heads: Vec<EventId> = Vec::new();
        match a.op {
            Op::Write | Op::Rmw => heads.push(a.id),
            Op::Fence => {
                for e in &x.thread(a.tid)[a.idx..] {
                    if e.op.is_write_like() {
                        heads.push(e.id);
                    }
                }
            }
            Op::Read => {}
        }
        // rf⁺ from each head.
        let mut reached: HashSet<EventId> = HashSet::new();
        let mut stack = heads;
        while let Some(w) = stack.pop() {
            for &r in x.readers_of(w) {
                if reached.insert(r) && x.event(r).op == Op::Rmw {
                    stack.push(r);
                }
            }
        }
        // The [E⊒acq] tail: the reader itself, or any ⊒acq fence po-after it.
        for &r in &reached {
            let re = x.event(r);
            if re.ord.is_acquire() {
                sw.insert(a.id, r);
            }
            for e in &x.thread(re.tid)[re.idx..] {
                if e.op == Op::Fence && e.ord.is_acquire() {
                    sw.insert(a.id, e.id);
                }
            }
        }
    }
    sw
}

/// Kahn topological order of (immediate-po ∪ rf), ties broken by smallest
/// event id. `Err` carries one concrete cycle (event ids in order).
pub fn porf_topo_order(x: &PartialExecution) -> Result<Vec<EventId>, Vec<EventId>> {
    porf_topo_order_dense(x).map(|(ids, _)| ids)
}

/// [`porf_topo_order`] that also yields the order in dense `(tid, idx)`
/// coordinates (`offsets[tid] + idx - 1` with offsets = prefix sums of
/// thread lengths), saving downstream passes the id → coordinate lookups.
pub fn porf_topo_order_dense(
    x: &PartialExecution,
) -> Result<(Vec<EventId>, Vec<u32>), Vec<EventId>> {
    // Dense (tid, idx) coordinates keep the hot path free of hashing.
    let k = x.num_threads();
    let n = x.num_events();
    let mut offsets = Vec::with_capacity(k);
    let mut acc = 0usize;
    for t in 0..k {
        offsets.push(acc);
        acc += x.thread(t).len();
    }
    let dense = |e: &crate::Event| offsets[e.tid] + e.idx - 1;
    let mut ids = vec![0 as EventId; n];
    // CSR adjacency: count, prefix-sum, fill — no per-node allocations.
    let mut indeg = vec![0u32; n];
    let mut deg = vec![0u32; n];
    for t in 0..k {
        for pair in x.thread(t).windows(2) {
            deg[dense(&pair[0])] += 1;
            indeg[dense(&pair[1])] += 1;
        }
        for e in x.thread(t) {
            ids[dense(e)] = e.id;
        }
    }
    let dense_id = |id: EventId| {
        let (t, i) = x.coords(id);
        offsets[t] + i
    };
    for (&r, &w) in x.rf() {
        deg[dense_id(w)] += 1;
        indeg[dense_id(r)] += 1;
    }
    let mut start = vec![0usize; n + 1];
    for d in 0..n {
        start[d + 1] = start[d] + deg[d] as usize;
    }
    let mut succ = vec![0u32; start[n]];
    let mut fill = start.clone();
    for t in 0..k {
        for pair in x.thread(t).windows(2) {
            let s = dense(&pair[0]);
            succ[fill[s]] = dense(&pair[1]) as u32;
            fill[s] += 1;
        }
    }
    for (&r, &w) in x.rf() {
        let s = dense_id(w);
        succ[fill[s]] = dense_id(r) as u32;
        fill[s] += 1;
    }
    // Smallest-id-first Kahn: deterministic, order-invariant downstream.
    let mut heap: BinaryHeap<std::cmp::Reverse<(EventId, u32)>> = (0..n)
        .filter(|&d| indeg[d] == 0)
        .map(|d| std::cmp::Reverse((ids[d], d as u32)))
        .collect();
    let mut order = Vec::with_capacity(n);
    let mut order_dense = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse((id, d))) = heap.pop() {
        order.push(id);
        order_dense.push(d);
        for &s in &succ[start[d as usize]..start[d as usize + 1]] {
            indeg[s as usize] -= 1;
            if indeg[s as usize] == 0 {
                heap.push(std::cmp::Reverse((ids[s as usize], s)));
            }
        }
    }
    if order.len() == n {
        Ok((order, order_dense))
    } else {
        // Cold path: rebuild the residual graph in id space for reporting.
        let mut succ_ids: HashMap<EventId, Vec<EventId>> = HashMap::new();
        let mut indeg_ids: HashMap<EventId, usize> = HashMap::new();
        for d in 0..n {
            indeg_ids.insert(ids[d], indeg[d] as usize);
            succ_ids
                .entry(ids[d])
                .or_default()
                .extend(succ[start[d]..start[d + 1]].iter().map(|&s| ids[s as usize]));
        }
        Err(extract_cycle(&succ_ids, &indeg_ids))
    }
}

/// Surfaces one cycle from the still-positive-indegree residual of a Kahn
/// run. Every residual node keeps a residual predecessor, so a backward walk
/// must revisit a node; the revisited segment, reversed, is a cycle.
fn extract_cycle(
    succ: &HashMap<EventId, Vec<EventId>>,
    indeg: &HashMap<EventId, usize>,
) -> Vec<EventId> {
    let alive: HashSet<EventId> = indeg
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(&v, _)| v)
        .collect();
    let mut pred: HashMap<EventId, EventId> = HashMap::new();
    for (&a, vs) in succ {
        if alive.contains(&a) {
            for &b in vs {
                if alive.contains(&b) {
                    pred.entry(b).or_insert(a);
                }
            }
        }
    }
    let start = *alive.iter().min().expect("cyclic graph has alive nodes");
    let mut path = vec![start];
    let mut on_path: HashMap<EventId, usize> = HashMap::from([(start, 0)]);
    let mut cur = start;
    loop {
        let prev = pred[&cur];
        if let Some(&i) = on_path.get(&prev) {
            let mut cycle = path[i..].to_vec();
            cycle.reverse();
            return cycle;
        }
        on_path.insert(prev, path.len());
        path.push(prev);
        cur = prev;
    }
}
