use crate::*;
use exec_core::{EventSpec, MemoryOrder, PartialExecution};
use std::collections::HashMap;

#[test]
fn message_passing_accepts() {
    let mut s = new_session(2);
    assert_eq!(s.on_write(1, 0, "x").unwrap(), StepResult::Accepted);
    assert_eq!(s.on_write(2, 0, "y").unwrap(), StepResult::Accepted);
    assert_eq!(s.on_write(3, 0, "x").unwrap(), StepResult::Accepted);
    assert_eq!(s.on_read(4, 1, "y", 2).unwrap(), StepResult::Accepted);
    assert_eq!(s.on_write(5, 1, "x").unwrap(), StepResult::Accepted);
    assert_eq!(s.on_read(6, 1, "x", 3).unwrap(), StepResult::Accepted);
}

#[test]
fn stale_read_rejected_and_session_dies() {
    let mut s = new_session(2);
    s.on_write(1, 0, "x").unwrap();
    s.on_write(2, 0, "y").unwrap();
    s.on_write(3, 0, "x").unwrap();
    s.on_read(4, 1, "y", 2).unwrap();
    s.on_write(5, 1, "x").unwrap();
    // Reading w1 after w5, with w3 visible through hb: RA-inconsistent.
    assert_eq!(s.on_read(6, 1, "x", 1).unwrap(), StepResult::Rejected);
    assert_eq!(s.on_fence(7, 1), Err(SessionError::SessionDead));
}

#[test]
fn stream_errors() {
    let mut s = new_session(2);
    s.on_write(1, 0, "x").unwrap();
    assert_eq!(s.on_read(2, 1, "x", 9), Err(SessionError::UnknownWriter(9)));
    assert!(matches!(
        s.on_read(2, 1, "y", 1),
        Err(SessionError::LocMismatch { writer: 1, .. })
    ));
    assert_eq!(s.on_write(1, 1, "x"), Err(SessionError::DuplicateId(1)));
    assert!(matches!(s.on_write(3, 5, "x"), Err(SessionError::BadThread { tid: 5, k: 2 })));
    s.on_rmw(4, 1, "x", 1).unwrap();
    assert_eq!(
        s.on_rmw(5, 0, "x", 1),
        Err(SessionError::WriterAlreadyConsumed { writer: 1 })
    );
}

#[test]
fn rejection_is_side_effect_free() {
    let mut s = new_session(2);
    s.on_write(1, 0, "x").unwrap();
    s.on_write(2, 0, "x").unwrap();
    s.on_read(3, 1, "x", 2).unwrap();
    let len_before = s.len();
    // Reading the overwritten w1 after observing w2 is stale.
    assert_eq!(s.on_read(4, 1, "x", 1).unwrap(), StepResult::Rejected);
    assert_eq!(s.len(), len_before);
}

#[test]
fn rmw_chain_coherence() {
    // w1 -> u2 -> u3 is one block; after observing u3, reading w1 or u2 is
    // stale, while reading u3 remains fine.
    let mut s = new_session(2);
    s.on_write(1, 0, "x").unwrap();
    s.on_rmw(2, 0, "x", 1).unwrap();
    s.on_rmw(3, 1, "x", 2).unwrap();
    s.on_read(4, 1, "x", 3).unwrap();
    assert_eq!(s.on_read(5, 1, "x", 2).unwrap(), StepResult::Rejected);
}

/// Replays a random execution into a session in event-id order and compares
/// the first rejected index against the shortest prefix that the offline RA
/// checker rejects.
#[test]
fn differential_vs_offline_ra() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let mut rejected_streams = 0;
    for _ in 0..300 {
        let events = random_stream(&mut rng);
        let k = 3;
        let streamed = stream_first_rejection(k, &events);
        let offline = offline_first_rejection(k, &events);
        assert_eq!(streamed, offline, "stream {events:?}");
        if streamed.is_some() {
            rejected_streams += 1;
        }
    }
    assert!(rejected_streams > 20, "want rejecting streams, got {rejected_streams}");
}

#[derive(Debug, Clone)]
pub(crate) enum Ev {
    W(u64, usize, &'static str),
    R(u64, usize, &'static str, u64),
    U(u64, usize, &'static str, u64),
}

fn random_stream(rng: &mut impl rand::Rng) -> Vec<Ev> {
    let n = rng.gen_range(6..=18);
    let locs = ["x", "y"];
    let mut out = Vec::new();
    let mut writes: Vec<(u64, usize)> = Vec::new();
    let mut consumed: std::collections::HashSet<u64> = Default::default();
    for id in 1..=n {
        let t = rng.gen_range(0..3usize);
        let l = rng.gen_range(0..2usize);
        let roll: f64 = rng.gen();
        let cands: Vec<u64> =
            writes.iter().filter(|&&(_, wl)| wl == l).map(|&(w, _)| w).collect();
        if roll < 0.4 || cands.is_empty() {
            out.push(Ev::W(id, t, locs[l]));
            writes.push((id, l));
        } else {
            let w = cands[rng.gen_range(0..cands.len())];
            if roll < 0.55 && !consumed.contains(&w) {
                out.push(Ev::U(id, t, locs[l], w));
                consumed.insert(w);
                writes.push((id, l));
            } else {
                out.push(Ev::R(id, t, locs[l], w));
            }
        }
    }
    out
}

fn stream_first_rejection(k: usize, events: &[Ev]) -> Option<usize> {
    let mut s = new_session(k);
    for (i, ev) in events.iter().enumerate() {
        let r = match *ev {
            Ev::W(id, t, l) => s.on_write(id, t, l),
            Ev::R(id, t, l, w) => s.on_read(id, t, l, w),
            Ev::U(id, t, l, w) => s.on_rmw(id, t, l, w),
        };
        match r.unwrap() {
            StepResult::Accepted => {}
            StepResult::Rejected => return Some(i),
        }
    }
    None
}

fn offline_first_rejection(k: usize, events: &[Ev]) -> Option<usize> {
    for end in 1..=events.len() {
        let mut threads: Vec<Vec<EventSpec>> = vec![Vec::new(); k];
        let mut rf = HashMap::new();
        for ev in &events[..end] {
            match *ev {
                Ev::W(id, t, l) => threads[t].push(EventSpec::write(id, l, MemoryOrder::Rel)),
                Ev::R(id, t, l, w) => {
                    threads[t].push(EventSpec::read(id, l, MemoryOrder::Acq));
                    rf.insert(id, w);
                }
                Ev::U(id, t, l, w) => {
                    threads[t].push(EventSpec::rmw(id, l, MemoryOrder::AcqRel));
                    rf.insert(id, w);
                }
            }
        }
        let x = PartialExecution::new(threads, rf).unwrap();
        if !checkers::check_ra(&x).consistent {
            return Some(end - 1);
        }
    }
    None
}
