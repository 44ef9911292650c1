//! Reduction from triangle detection to WRA consistency: the generated
//! execution is WRA-inconsistent iff the input graph contains a triangle.
//!
//! Per node α there are three single-purpose threads: the base write
//! `w_α(y_α)`, a write junction `jw_α`, and a read junction `jr_α`. Per edge
//! (α, β), α < β, three more: a relay `e_(α,β)`, a read `r^α_β` of `y_β`
//! from `w_β`, and an overwrite `w^β_α` of `y_α`. Five hb constraints per
//! edge wire the gadget together, each realized with a fresh location: a
//! release write appended to the source's thread and an acquire read
//! prepended to the target's thread. A triangle {α, β, γ} then hb-sandwiches
//! an overwrite of `y_β` between `w_β` and `r^α_β`, violating weak read
//! coherence; without a triangle no such path closes.
//!
//! Size: 3|V| + 13|E| events.

use exec_core::{EventSpec, MemoryOrder, PartialExecution};
use std::collections::{BTreeSet, HashMap};

/// Simple undirected graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(n: usize) -> Self {
        UndirectedGraph { n, edges: BTreeSet::new() }
    }

    /// Add an undirected edge; self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "node out of range");
        if u != v {
            self.edges.insert((u.min(v), u.max(v)));
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    /// Edges as canonical (min, max) pairs in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Brute-force triangle test.
    pub fn has_triangle(&self) -> bool {
        for &(u, v) in &self.edges {
            for w in 0..self.n {
                if w != u && w != v && self.has_edge(u, w) && self.has_edge(v, w) {
                    return true;
                }
            }
        }
        false
    }

    /// Parse a 1-based edge list: one `u v` pair per line, `#` comments.
    /// The node count is the largest endpoint mentioned.
    pub fn from_edge_list(text: &str) -> Result<Self, String> {
        let mut pairs = Vec::new();
        let mut max_node = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<usize, String> {
                let s = s.ok_or_else(|| format!("line {}: expected `u v`", lineno + 1))?;
                let v: usize = s
                    .parse()
                    .map_err(|_| format!("line {}: bad node `{s}`", lineno + 1))?;
                if v == 0 {
                    return Err(format!("line {}: nodes are 1-based", lineno + 1));
                }
                Ok(v)
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(format!("line {}: trailing tokens", lineno + 1));
            }
            max_node = max_node.max(u).max(v);
            pairs.push((u - 1, v - 1));
        }
        let mut g = UndirectedGraph::new(max_node);
        for (u, v) in pairs {
            g.add_edge(u, v);
        }
        Ok(g)
    }
}

/// Thread-under-construction: reads to prepend, the core event, writes to
/// append. Core-less threads hold only wiring events.
#[derive(Default)]
struct Gadget {
    pre: Vec<EventSpec>,
    core: Option<EventSpec>,
    post: Vec<EventSpec>,
}

/// Build the reduction execution for `g`.
pub fn gen_triangle_reduction(g: &UndirectedGraph) -> PartialExecution {
    let mut gadgets: Vec<Gadget> = Vec::new();
    let mut rf: HashMap<u64, u64> = HashMap::new();
    let mut next_id: u64 = 1;
    fn fresh(gadgets: &mut Vec<Gadget>) -> usize {
        gadgets.push(Gadget::default());
        gadgets.len() - 1
    }
    fn take_id(next_id: &mut u64) -> u64 {
        let id = *next_id;
        *next_id += 1;
        id
    }

    // Node threads: base write, write junction, read junction. Junctions
    // need location-carrying cores so that every thread parses back
    // losslessly; they write private `jw_α`/`jr_α` locations.
    let mut w_node = Vec::with_capacity(g.num_nodes());
    let mut jw_node = Vec::with_capacity(g.num_nodes());
    let mut jr_node = Vec::with_capacity(g.num_nodes());
    for a in 0..g.num_nodes() {
        let tw = fresh(&mut gadgets);
        let id = take_id(&mut next_id);
        gadgets[tw].core = Some(EventSpec::write(id, &format!("y_{a}"), MemoryOrder::Rel));
        w_node.push((tw, id));

        let tjw = fresh(&mut gadgets);
        let id = take_id(&mut next_id);
        gadgets[tjw].core = Some(EventSpec::write(id, &format!("jw_{a}"), MemoryOrder::Rel));
        jw_node.push((tjw, id));

        let tjr = fresh(&mut gadgets);
        let id = take_id(&mut next_id);
        gadgets[tjr].core = Some(EventSpec::write(id, &format!("jr_{a}"), MemoryOrder::Rel));
        jr_node.push((tjr, id));
    }

    // Edge threads.
    let mut hb_count = 0usize;
    let edges: Vec<(usize, usize)> = g.edges().collect();
    fn hb_edge(
        gadgets: &mut [Gadget],
        rf: &mut HashMap<u64, u64>,
        next_id: &mut u64,
        hb_count: &mut usize,
        src: usize,
        dst: usize,
    ) {
        let loc = format!("hbe_{hb_count}");
        *hb_count += 1;
        let wid = *next_id;
        *next_id += 1;
        let rid = *next_id;
        *next_id += 1;
        gadgets[src].post.push(EventSpec::write(wid, &loc, MemoryOrder::Rel));
        gadgets[dst].pre.push(EventSpec::read(rid, &loc, MemoryOrder::Acq));
        rf.insert(rid, wid);
    }
    for &(a, b) in &edges {
        let te = fresh(&mut gadgets);
        let id = take_id(&mut next_id);
        gadgets[te].core = Some(EventSpec::write(id, &format!("e_{a}_{b}"), MemoryOrder::Rel));
        let e_ab = (te, id);

        let tr = fresh(&mut gadgets);
        let id = take_id(&mut next_id);
        gadgets[tr].core = Some(EventSpec::read(id, &format!("y_{b}"), MemoryOrder::Acq));
        rf.insert(id, w_node[b].1);
        let r_ab = (tr, id);

        let tw = fresh(&mut gadgets);
        let id = take_id(&mut next_id);
        gadgets[tw].core = Some(EventSpec::write(id, &format!("y_{a}"), MemoryOrder::Rel));
        let w_ba = (tw, id);

        // The five hb constraints of the gadget.
        hb_edge(&mut gadgets, &mut rf, &mut next_id, &mut hb_count, w_node[a].0, w_ba.0);
        hb_edge(&mut gadgets, &mut rf, &mut next_id, &mut hb_count, w_ba.0, jw_node[b].0);
        hb_edge(&mut gadgets, &mut rf, &mut next_id, &mut hb_count, jw_node[b].0, e_ab.0);
        hb_edge(&mut gadgets, &mut rf, &mut next_id, &mut hb_count, e_ab.0, jr_node[a].0);
        hb_edge(&mut gadgets, &mut rf, &mut next_id, &mut hb_count, jr_node[a].0, r_ab.0);
    }

    let threads: Vec<Vec<EventSpec>> = gadgets
        .into_iter()
        .map(|g| {
            let mut t = g.pre;
            t.extend(g.core);
            t.extend(g.post);
            t
        })
        .collect();
    PartialExecution::new(threads, rf).expect("reduction builds a valid execution")
}
