//! Small dense-graph helper: Kahn's algorithm with cycle extraction, used for
//! every acyclicity verdict in this crate.

use exec_core::EventId;
use std::collections::HashMap;

/// A digraph over a fixed node set of event ids. The id → node translation
/// is a flat array over the id range (ids are dense in practice), and edges
/// accumulate in a flat list — both keep `add_edge` hash-free and
/// allocation-free on the hot path; adjacency is materialized once in
/// [`Self::toposort`].
pub struct CycleGraph {
    ids: Vec<EventId>,
    index: Vec<u32>,
    edges: Vec<(u32, u32)>,
}

impl CycleGraph {
    pub fn new(ids: Vec<EventId>) -> Self {
        let max = ids.iter().copied().max().unwrap_or(0);
        let mut index = vec![u32::MAX; max as usize + 1];
        for (i, &id) in ids.iter().enumerate() {
            index[id as usize] = i as u32;
        }
        CycleGraph { ids, index, edges: Vec::new() }
    }

    /// Adds an edge; duplicate edges are harmless (indegrees stay matched).
    pub fn add_edge(&mut self, a: EventId, b: EventId) {
        self.edges.push((self.index[a as usize], self.index[b as usize]));
    }

    /// `Ok(topological order)` or `Err(one concrete cycle)`, both as event
    /// ids. Deterministic: ready nodes are taken smallest-id first.
    pub fn toposort(self) -> Result<Vec<EventId>, Vec<EventId>> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let n = self.ids.len();
        // CSR adjacency via counting sort over the flat edge list.
        let mut start = vec![0usize; n + 1];
        for &(a, _) in &self.edges {
            start[a as usize + 1] += 1;
        }
        for i in 0..n {
            start[i + 1] += start[i];
        }
        let mut succ = vec![0u32; self.edges.len()];
        let mut fill = start.clone();
        let mut indeg = vec![0usize; n];
        for &(a, b) in &self.edges {
            succ[fill[a as usize]] = b;
            fill[a as usize] += 1;
            indeg[b as usize] += 1;
        }
        let mut heap: BinaryHeap<Reverse<(EventId, usize)>> = (0..n)
            .filter(|&i| indeg[i] == 0)
            .map(|i| Reverse((self.ids[i], i)))
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse((_, i))) = heap.pop() {
            order.push(self.ids[i]);
            for &j in &succ[start[i]..start[i + 1]] {
                indeg[j as usize] -= 1;
                if indeg[j as usize] == 0 {
                    heap.push(Reverse((self.ids[j as usize], j as usize)));
                }
            }
        }
        if order.len() == n {
            return Ok(order);
        }
        // Residual nodes all keep a residual predecessor; walk backwards
        // until a node repeats, then reverse the repeated segment.
        let alive: Vec<bool> = indeg.iter().map(|&d| d > 0).collect();
        let mut pred: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            if alive[i] {
                for &j in &succ[start[i]..start[i + 1]] {
                    if alive[j as usize] && pred[j as usize].is_none() {
                        pred[j as usize] = Some(i);
                    }
                }
            }
        }
        let start_node = (0..n).find(|&i| alive[i]).expect("residual is nonempty");
        let mut on_path: HashMap<usize, usize> = HashMap::from([(start_node, 0)]);
        let mut path = vec![start_node];
        let mut cur = start_node;
        loop {
            let p = pred[cur].expect("residual node has residual predecessor");
            if let Some(&at) = on_path.get(&p) {
                let mut cycle: Vec<EventId> = path[at..].iter().map(|&i| self.ids[i]).collect();
                cycle.reverse();
                return Err(cycle);
            }
            on_path.insert(p, path.len());
            path.push(p);
            cur = p;
        }
    }
}
