//! Seeded random executions. Readers only target already-emitted writes, so
//! po ∪ rf is acyclic by construction and the result always validates.

use exec_core::{EventSpec, MemoryOrder, Op, PartialExecution};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};

/// Parameters for [`gen_random`].
#[derive(Debug, Clone)]
pub struct GenParams {
    pub events: usize,
    pub threads: usize,
    pub locs: usize,
    /// Probability that a location access becomes an RMW (when an
    /// unconsumed write is available).
    pub rmw_prob: f64,
    /// Probability that an event is a fence.
    pub fence_prob: f64,
    pub seed: u64,
    /// Optional cap on write-like events (writes and RMWs) per location;
    /// once reached, further accesses of that location become plain reads.
    pub max_writes_per_loc: Option<usize>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            events: 16,
            threads: 2,
            locs: 2,
            rmw_prob: 0.2,
            fence_prob: 0.05,
            seed: 0,
            max_writes_per_loc: None,
        }
    }
}

/// Generate a random valid execution. Deterministic in `params` (ChaCha8
/// keyed by `seed`). Event ids are `1..=events` in emission order, so every
/// id-prefix of the event stream is itself a valid execution.
pub fn gen_random(params: &GenParams) -> PartialExecution {
    assert!(params.threads >= 1 && params.locs >= 1, "need at least one thread and location");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let loc_names: Vec<String> = (0..params.locs).map(|i| format!("x{i}")).collect();
    let mut threads: Vec<Vec<EventSpec>> = vec![Vec::new(); params.threads];
    let mut rf: HashMap<u64, u64> = HashMap::new();
    // Per loc: emitted write ids; globally: writes already feeding an RMW.
    let mut writes: Vec<Vec<u64>> = vec![Vec::new(); params.locs];
    let mut consumed: HashSet<u64> = HashSet::new();

    for id in 1..=params.events as u64 {
        let t = rng.gen_range(0..params.threads);
        if rng.gen_bool(params.fence_prob) {
            let ord = *pick(&mut rng, &[MemoryOrder::Acq, MemoryOrder::Rel, MemoryOrder::AcqRel]);
            threads[t].push(EventSpec::fence(id, ord));
            continue;
        }
        let loc = rng.gen_range(0..params.locs);
        let cap_hit = params
            .max_writes_per_loc
            .is_some_and(|cap| writes[loc].len() >= cap);
        let want_write = !cap_hit && (writes[loc].is_empty() || rng.gen_bool(0.45));
        if want_write {
            let ord = legal_mode(&mut rng, Op::Write);
            threads[t].push(EventSpec::write(id, &loc_names[loc], ord));
            writes[loc].push(id);
            continue;
        }
        // Read-like access; no writes on the location means the cap cannot
        // have been hit, so this arm always has a target. RMWs are
        // write-like, so a hit cap forces a plain read.
        let unconsumed: Vec<u64> =
            writes[loc].iter().copied().filter(|w| !consumed.contains(w)).collect();
        if !cap_hit && !unconsumed.is_empty() && rng.gen_bool(params.rmw_prob) {
            let w = *pick(&mut rng, &unconsumed);
            threads[t].push(EventSpec::rmw(id, &loc_names[loc], legal_mode(&mut rng, Op::Rmw)));
            rf.insert(id, w);
            consumed.insert(w);
            writes[loc].push(id);
        } else {
            let w = *pick(&mut rng, &writes[loc]);
            threads[t].push(EventSpec::read(id, &loc_names[loc], legal_mode(&mut rng, Op::Read)));
            rf.insert(id, w);
        }
    }
    PartialExecution::new(threads, rf).expect("construction keeps the execution valid")
}

/// Draw any mode, then project illegal combinations onto legal ones
/// (release-reads and acquire-writes become relaxed).
fn legal_mode(rng: &mut impl Rng, op: Op) -> MemoryOrder {
    let raw = *pick(
        rng,
        &[MemoryOrder::Rlx, MemoryOrder::Acq, MemoryOrder::Rel, MemoryOrder::AcqRel],
    );
    match (op, raw) {
        (Op::Read, MemoryOrder::Rel) | (Op::Read, MemoryOrder::AcqRel) => MemoryOrder::Rlx,
        (Op::Write, MemoryOrder::Acq) | (Op::Write, MemoryOrder::AcqRel) => MemoryOrder::Rlx,
        (_, m) => m,
    }
}

fn pick<'a, T>(rng: &mut impl Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}
