//! Acceptance gate: end-to-end criteria for the whole workspace, exercised
//! through the public crate APIs. Each test is one numbered criterion.

use axioms_oracle::{eval_model, oracle_consistent, oracle_witness_intersection, Model};
use checkers::{
    check_ra, check_rc20, check_relaxed, check_sra_full, check_sra_normw, check_wra,
    complete_witness_rc20, rc20_minimally_coherent, relaxed_minimally_coherent,
    sra_minimally_coherent, SraSearchConfig, Verdict,
};
use exec_core::{
    strengthen_modes, EventSpec, MemoryOrder, ModificationOrder, Op, PartialExecution,
};
use generators::{
    gen_litmus, gen_preset, gen_random, gen_triangle_reduction, GenParams, UndirectedGraph,
    LITMUS_NAMES, PRESET_NAMES,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::time::Instant;

const ORACLE_LIMIT: u128 = 10_000_000;

fn sra(x: &PartialExecution) -> Verdict {
    check_sra_full(x, SraSearchConfig::default()).expect("node cap hit")
}

/// Demote every non-fence event to rlx (fences cannot legally be rlx).
fn demote(x: &PartialExecution) -> PartialExecution {
    x.map_modes(|op, ord| if op == Op::Fence { ord } else { MemoryOrder::Rlx })
}

fn small_corpus_params(seed: u64) -> GenParams {
    GenParams {
        events: 6 + (seed % 7) as usize, // ≤ 12
        threads: 1 + (seed % 3) as usize,
        locs: 1 + (seed % 2) as usize,
        rmw_prob: 0.3,
        fence_prob: 0.2,
        seed,
        max_writes_per_loc: Some(4),
    }
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn c1_golden_litmus_verdicts() {
    let t0 = Instant::now();
    let get = |name: &str| gen_litmus(name).unwrap();

    let mp = get("fig1-mp");
    assert!(check_wra(&mp).consistent);
    assert!(check_ra(&mp).consistent);
    assert!(check_rc20(&mp).consistent);
    assert!(sra(&mp).consistent);

    let incons = get("fig1-incons");
    assert!(!check_wra(&incons).consistent);
    assert!(!check_ra(&incons).consistent);
    assert!(check_relaxed(&incons).consistent);

    let fig2a = get("fig2a");
    assert!(sra(&fig2a).consistent);
    assert!(oracle_consistent(&fig2a, Model::Sc, ORACLE_LIMIT).unwrap().is_none());

    let fig2b = get("fig2b");
    assert!(check_ra(&fig2b).consistent);
    assert!(!sra(&fig2b).consistent);

    let fig2c = get("fig2c");
    assert!(check_wra(&fig2c).consistent);
    assert!(!check_ra(&fig2c).consistent);
    assert!(!check_relaxed(&fig2c).consistent);

    let fig2d = get("fig2d");
    assert!(!check_wra(&fig2d).consistent);
    assert!(check_relaxed(&fig2d).consistent);

    let fig5 = get("fig5");
    assert!(check_wra(&fig5).consistent);
    assert!(check_rc20(&fig5).consistent);
    assert!(check_relaxed(&fig5).consistent);
    assert!(sra(&fig5).consistent);

    assert!(t0.elapsed().as_secs_f64() < 1.0, "litmus verdicts took {:?}", t0.elapsed());
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn c2_fig5_hb_fixture() {
    let x = gen_litmus("fig5").unwrap();
    let hb = hb_engine::compute_hb(&x).unwrap();
    assert_eq!(hb.vector(7), &[3, 0, 0, 2]);

    let loc = |name: &str| (0..x.num_locs()).find(|&l| x.loc_name(l) == name).unwrap();
    let (lx, ly) = (loc("x"), loc("y"));
    let mut obs = hb_engine::ObserverLists::new(&x);
    assert_eq!(obs.last_write_before(0, lx, 2, 3).unwrap(), Some(1));
    assert_eq!(obs.last_write_before(1, lx, 1, 3).unwrap(), None);
    assert_eq!(obs.last_write_before(1, ly, 1, 3).unwrap(), Some(4));
    assert_eq!(obs.last_read_before(0, lx, 2, 3).unwrap(), Some(2));

    let chains = exec_core::build_rf_chains(&x).unwrap();
    assert_eq!(chains.tc(4), 3);
    assert_eq!(chains.tc(5), 3);
    assert_eq!(chains.pc(3), 0);
    assert_eq!(chains.pc(4), 1);
    assert_eq!(chains.pc(5), 2);
}

// ---------------------------------------------------- criteria 3, 4, 5 corpus

#[test]
fn c3_checkers_match_oracles_on_2000_random_executions() {
    let t0 = Instant::now();
    for seed in 0..2000u64 {
        let x = gen_random(&small_corpus_params(seed));

        let wra = check_wra(&x).consistent;
        let wra_o = oracle_consistent(&x, Model::Wra, ORACLE_LIMIT).unwrap().is_some();
        assert_eq!(wra, wra_o, "seed {seed}: wra");

        let sra_v = sra(&x).consistent;
        let sra_o = oracle_consistent(&x, Model::Sra, ORACLE_LIMIT).unwrap().is_some();
        assert_eq!(sra_v, sra_o, "seed {seed}: sra");

        let rc20 = check_rc20(&x).consistent;
        let rc20_o = oracle_consistent(&x, Model::Rc20, ORACLE_LIMIT).unwrap().is_some();
        assert_eq!(rc20, rc20_o, "seed {seed}: rc20");

        let xd = demote(&x);
        let rlx = check_relaxed(&xd).consistent;
        let rlx_o = oracle_consistent(&xd, Model::Relaxed, ORACLE_LIMIT).unwrap().is_some();
        assert_eq!(rlx, rlx_o, "seed {seed}: relaxed");

        if x.events().all(|e| e.op != Op::Rmw) {
            let normw = check_sra_normw(&x).unwrap().consistent;
            assert_eq!(normw, sra_v, "seed {seed}: sra-normw vs full");
        }
    }
    assert!(t0.elapsed().as_secs() < 300, "corpus differential took {:?}", t0.elapsed());
}

fn assert_subset_of_intersection(
    seed: u64,
    model: Model,
    x: &PartialExecution,
    pm: &ModificationOrder,
) {
    let inter = oracle_witness_intersection(x, model, ORACLE_LIMIT)
        .unwrap()
        .unwrap_or_else(|| panic!("seed {seed}: {model:?} checker consistent, oracle not"));
    for (a, b) in pm.all_pairs() {
        assert!(
            inter.contains(&(a, b)),
            "seed {seed}: {model:?} pm edge ({a},{b}) not necessary"
        );
    }
}

#[test]
fn c4_partial_mos_are_minimally_coherent_necessary_and_completable() {
    for seed in 0..2000u64 {
        let x = gen_random(&small_corpus_params(seed));

        let v = check_rc20(&x);
        if v.consistent {
            let pm = v.partial_mo.as_ref().unwrap();
            assert!(rc20_minimally_coherent(&x, pm), "seed {seed}: rc20 min-coh");
            assert_subset_of_intersection(seed, Model::Rc20, &x, pm);
            let w = complete_witness_rc20(&x, pm)
                .unwrap_or_else(|_| panic!("seed {seed}: rc20 completion"));
            assert!(
                eval_model(&x, &w, Model::Rc20).all_hold(),
                "seed {seed}: rc20 witness fails axioms"
            );
        }

        let v = check_ra(&x);
        if v.consistent {
            let xs = strengthen_modes(&x);
            let pm = v.partial_mo.as_ref().unwrap();
            assert!(rc20_minimally_coherent(&xs, pm), "seed {seed}: ra min-coh");
            assert_subset_of_intersection(seed, Model::Ra, &x, pm);
            let w = complete_witness_rc20(&xs, pm)
                .unwrap_or_else(|_| panic!("seed {seed}: ra completion"));
            assert!(
                eval_model(&x, &w, Model::Ra).all_hold(),
                "seed {seed}: ra witness fails axioms"
            );
        }

        let v = check_relaxed(&x);
        if v.consistent {
            let pm = v.partial_mo.as_ref().unwrap();
            assert!(relaxed_minimally_coherent(&x, pm), "seed {seed}: relaxed min-coh");
            assert_subset_of_intersection(seed, Model::Relaxed, &x, pm);
        }

        let v = sra(&x);
        if v.consistent {
            let w = v.witness_mo.as_ref().unwrap();
            assert!(
                eval_model(&x, w, Model::Sra).all_hold(),
                "seed {seed}: sra path witness fails axioms"
            );
        }

        if x.events().all(|e| e.op != Op::Rmw) {
            let v = check_sra_normw(&x).unwrap();
            if v.consistent {
                let pm = v.partial_mo.as_ref().unwrap();
                assert!(sra_minimally_coherent(&x, pm), "seed {seed}: sra min-coh");
                assert_subset_of_intersection(seed, Model::Sra, &x, pm);
                let w = v.witness_mo.as_ref().unwrap();
                assert!(
                    eval_model(&x, w, Model::Sra).all_hold(),
                    "seed {seed}: sra-normw witness fails axioms"
                );
            }
        }
    }
}

#[test]
fn c5_lattice_monotonicity_over_corpus() {
    for seed in 0..2000u64 {
        let x = gen_random(&small_corpus_params(seed));
        let sra_c = sra(&x).consistent;
        let ra_c = check_ra(&x).consistent;
        let wra_c = check_wra(&x).consistent;
        let rc20_c = check_rc20(&x).consistent;
        let rlx_c = check_relaxed(&x).consistent;
        assert!(!sra_c || ra_c, "seed {seed}: SRA ⇒ RA");
        assert!(!ra_c || wra_c, "seed {seed}: RA ⇒ WRA");
        assert!(!ra_c || rc20_c, "seed {seed}: RA ⇒ RC20");
        assert!(!rc20_c || rlx_c, "seed {seed}: RC20 ⇒ Relaxed");
    }
}

// ---------------------------------------------------------------- criterion 6

fn assert_triangle_equivalence(g: &UndirectedGraph, label: &str) {
    let x = gen_triangle_reduction(g);
    let expect_incons = g.has_triangle();
    assert_eq!(!check_wra(&x).consistent, expect_incons, "{label}: wra");
    assert_eq!(!check_ra(&x).consistent, expect_incons, "{label}: ra");
    let normw = check_sra_normw(&x).expect("reduction is RMW-free");
    assert_eq!(!normw.consistent, expect_incons, "{label}: sra-normw");
}

#[test]
fn c6_triangle_reduction_exhaustive_and_random() {
    let t0 = Instant::now();
    // All 2^10 = 1024 graphs on 5 labelled nodes.
    let pairs: Vec<(usize, usize)> =
        (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
    for mask in 0u32..1024 {
        let mut g = UndirectedGraph::new(5);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                g.add_edge(u, v);
            }
        }
        assert_triangle_equivalence(&g, &format!("mask {mask}"));
    }
    // 200 random graphs on up to 8 nodes.
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for i in 0..200 {
        let n = rng.gen_range(2..=8);
        let mut g = UndirectedGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.35) {
                    g.add_edge(u, v);
                }
            }
        }
        assert_triangle_equivalence(&g, &format!("random {i}"));
    }
    assert!(t0.elapsed().as_secs() < 120, "triangle suite took {:?}", t0.elapsed());
}

// ---------------------------------------------------------------- criterion 7

/// The execution restricted to events with id ≤ `m` (generator ids are
/// emission-ordered, so this is a prefix in arrival order).
fn prefix(x: &PartialExecution, m: u64) -> PartialExecution {
    let threads: Vec<Vec<EventSpec>> = (0..x.num_threads())
        .map(|t| {
            x.thread(t)
                .iter()
                .filter(|e| e.id <= m)
                .map(|e| EventSpec {
                    id: e.id,
                    op: e.op,
                    ord: e.ord,
                    loc: e.loc.map(|l| x.loc_name(l).to_string()),
                })
                .collect()
        })
        .collect();
    let rf: HashMap<u64, u64> =
        x.rf().iter().filter(|&(&r, _)| r <= m).map(|(&r, &w)| (r, w)).collect();
    PartialExecution::new(threads, rf).expect("prefix of a valid execution is valid")
}

/// Feed `x` to an incremental session in id order; the first rejected id.
fn stream_first_rejection(x: &PartialExecution) -> Option<u64> {
    let mut session = incremental_ra::new_session(x.num_threads());
    let mut events: Vec<_> = x.events().collect();
    events.sort_by_key(|e| e.id);
    for e in events {
        let loc = e.loc.map(|l| x.loc_name(l).to_string()).unwrap_or_default();
        let step = match e.op {
            Op::Write => session.on_write(e.id, e.tid, &loc),
            Op::Read => session.on_read(e.id, e.tid, &loc, x.writer_of(e.id).unwrap()),
            Op::Rmw => session.on_rmw(e.id, e.tid, &loc, x.writer_of(e.id).unwrap()),
            Op::Fence => session.on_fence(e.id, e.tid),
        };
        match step.expect("well-formed feed") {
            incremental_ra::StepResult::Accepted => {}
            incremental_ra::StepResult::Rejected => return Some(e.id),
        }
    }
    None
}

fn offline_first_rejection(x: &PartialExecution) -> Option<u64> {
    (1..=x.num_events() as u64).find(|&m| !check_ra(&prefix(x, m)).consistent)
}

#[test]
fn c7_stream_matches_shortest_rejected_prefix() {
    for seed in 0..500u64 {
        let x = gen_random(&GenParams {
            events: 10 + (seed % 31) as usize, // ≤ 40
            threads: 1 + (seed % 3) as usize,
            locs: 1 + (seed % 2) as usize,
            rmw_prob: 0.2,
            fence_prob: 0.1,
            seed: 7000 + seed,
            max_writes_per_loc: None,
        });
        assert_eq!(
            stream_first_rejection(&x),
            offline_first_rejection(&x),
            "seed {seed}: first-rejection index"
        );
    }
    for name in PRESET_NAMES {
        let x = gen_preset(name, 64, 3).unwrap();
        assert_eq!(stream_first_rejection(&x), None, "preset {name}: stream rejects");
        assert_eq!(offline_first_rejection(&x), None, "preset {name}: offline rejects");
    }
}

// ---------------------------------------------------------------- criterion 8

fn best_time(reps: usize, mut f: impl FnMut()) -> f64 {
    let mut best = f64::INFINITY;
    for _ in 0..reps {
        let t0 = Instant::now();
        f();
        best = best.min(t0.elapsed().as_secs_f64());
    }
    best
}

#[test]
fn c8_scaling_smoke() {
    let sizes = [10_000usize, 40_000, 160_000];
    let runs: [(&str, &str, fn(&PartialExecution)); 3] = [
        ("wra", "fixed-chain-rw", |x| assert!(check_wra(x).consistent)),
        ("sra-normw", "new-read-events", |x| {
            assert!(check_sra_normw(x).unwrap().consistent)
        }),
        ("rc20", "fixed-chain-wr", |x| assert!(check_rc20(x).consistent)),
    ];
    for (checker, preset, f) in runs {
        let execs: Vec<PartialExecution> =
            sizes.iter().map(|&n| gen_preset(preset, n, 4).unwrap()).collect();
        // Interleave passes over the sizes: the machine is shared, and taking
        // each size's minimum across passes spread over the whole run keeps a
        // contention burst from inflating one size only.
        let mut best = [f64::INFINITY; 3];
        for _pass in 0..4 {
            for (i, x) in execs.iter().enumerate() {
                best[i] = best[i].min(best_time(2, || f(x)));
            }
        }
        for (i, &n) in sizes.iter().enumerate() {
            let t = best[i];
            assert!(t < 30.0, "{checker} on {preset} n={n} took {t:.2}s");
            if i > 0 {
                let ratio = t / best[i - 1];
                assert!(
                    ratio <= 6.0,
                    "{checker} on {preset}: 4x step n={n} blew up {ratio:.2}x"
                );
            }
        }
    }
    // check_relaxed must be insensitive to satellite count at fixed n.
    let n = 40_000;
    let x2 = gen_preset("fixed-chain-rw", n, 2).unwrap();
    let x16 = gen_preset("fixed-chain-rw", n, 16).unwrap();
    let t2 = best_time(7, || assert!(check_relaxed(&x2).consistent));
    let t16 = best_time(7, || assert!(check_relaxed(&x16).consistent));
    let ratio = t16 / t2;
    assert!(
        (0.75..=1.25).contains(&ratio),
        "relaxed k-sensitivity: k=2 {t2:.4}s vs k=16 {t16:.4}s (ratio {ratio:.2})"
    );
}

// ---------------------------------------------------------------- criterion 9

#[test]
fn c9_sra_full_rmw_laden() {
    let t0 = Instant::now();
    for seed in 0..10u64 {
        let x = gen_random(&GenParams {
            events: 14,
            threads: 2,
            locs: 2,
            rmw_prob: 0.6,
            fence_prob: 0.0,
            seed: 9000 + seed,
            max_writes_per_loc: None,
        });
        // Default node cap must never be reached on this scale.
        check_sra_full(&x, SraSearchConfig::default())
            .unwrap_or_else(|e| panic!("seed {seed}: {e:?}"));
    }
    assert!(t0.elapsed().as_secs() < 10, "SRA full suite took {:?}", t0.elapsed());
}

// ------------------------------------------------------- supporting coverage

#[test]
fn litmus_names_are_exhaustive() {
    assert_eq!(
        LITMUS_NAMES,
        &["fig1-mp", "fig1-incons", "fig2a", "fig2b", "fig2c", "fig2d", "fig5"]
    );
    for name in LITMUS_NAMES {
        assert!(gen_litmus(name).is_some());
    }
    assert!(gen_litmus("nope").is_none());
}
