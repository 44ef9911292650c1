//! The named litmus executions used throughout the figures.

use exec_core::{EventSpec, MemoryOrder, PartialExecution};
use std::collections::HashMap;

/// Recognized litmus names, in documentation order.
pub const LITMUS_NAMES: &[&str] =
    &["fig1-mp", "fig1-incons", "fig2a", "fig2b", "fig2c", "fig2d", "fig5"];

/// Build a litmus execution by name; `None` for unknown names.
pub fn gen_litmus(name: &str) -> Option<PartialExecution> {
    use MemoryOrder::*;
    let w = |id, loc: &str| EventSpec::write(id, loc, Rel);
    let r = |id, loc: &str| EventSpec::read(id, loc, Acq);
    let (threads, rf): (Vec<Vec<EventSpec>>, Vec<(u64, u64)>) = match name {
        // Message passing; the final read sees the newest x.
        "fig1-mp" => (
            vec![
                vec![w(1, "x"), w(2, "y"), w(3, "x")],
                vec![r(4, "y"), w(5, "x"), r(6, "x")],
            ],
            vec![(4, 2), (6, 3)],
        ),
        // Same shape, but the final read is stale: RA-inconsistent while
        // WRA-consistent is not on offer (the own-thread w5 intervenes).
        "fig1-incons" => (
            vec![
                vec![w(1, "x"), w(2, "y"), w(3, "x")],
                vec![r(4, "y"), w(5, "x"), r(6, "x")],
            ],
            vec![(4, 2), (6, 1)],
        ),
        // SRA-consistent, SC-inconsistent.
        "fig2a" => (
            vec![
                vec![w(1, "x"), w(2, "x"), w(3, "y"), r(4, "y")],
                vec![w(5, "y"), r(6, "x")],
            ],
            vec![(4, 5), (6, 1)],
        ),
        // RA-consistent, SRA-inconsistent.
        "fig2b" => (
            vec![
                vec![w(1, "y"), w(2, "x"), r(3, "x")],
                vec![w(4, "x"), w(5, "y"), r(6, "y")],
            ],
            vec![(3, 4), (6, 1)],
        ),
        // WRA-consistent, RA-inconsistent: symmetric stale cross-reads.
        "fig2c" => (
            vec![vec![w(1, "x"), r(2, "x")], vec![w(3, "x"), r(4, "x")]],
            vec![(2, 3), (4, 1)],
        ),
        // WRA-inconsistent: hb-sandwiched stale read.
        "fig2d" => (
            vec![
                vec![w(1, "x"), w(2, "x"), w(3, "y")],
                vec![r(4, "y"), r(5, "x")],
            ],
            vec![(4, 3), (5, 1)],
        ),
        // The rf-chain example: a release write propagated through a relaxed
        // RMW chain to an acquire read.
        "fig5" => (
            vec![
                vec![
                    EventSpec::write(1, "x", Rlx),
                    EventSpec::read(2, "x", Rlx),
                    EventSpec::write(3, "y", Rel),
                ],
                vec![EventSpec::rmw(4, "y", Rlx)],
                vec![EventSpec::rmw(5, "y", Rlx)],
                vec![EventSpec::read(6, "y", Acq), EventSpec::read(7, "x", Rlx)],
            ],
            vec![(2, 1), (4, 3), (5, 4), (6, 5), (7, 1)],
        ),
        _ => return None,
    };
    let rf: HashMap<u64, u64> = rf.into_iter().collect();
    Some(PartialExecution::new(threads, rf).expect("litmus encodings are valid"))
}
