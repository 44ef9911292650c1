use crate::*;
use axioms_oracle::Model;
use exec_core::{EventSpec, MemoryOrder, PartialExecution};
use std::collections::HashMap;

fn rel_w(id: u64, loc: &str) -> EventSpec {
    EventSpec::write(id, loc, MemoryOrder::Rel)
}
fn acq_r(id: u64, loc: &str) -> EventSpec {
    EventSpec::read(id, loc, MemoryOrder::Acq)
}

fn exec(threads: Vec<Vec<EventSpec>>, rf: &[(u64, u64)]) -> PartialExecution {
    PartialExecution::new(threads, rf.iter().copied().collect::<HashMap<_, _>>()).unwrap()
}

/// Message passing with a stale read at the end (figure-1 style):
/// WRA-consistent, RA-inconsistent.
fn fig1_mp() -> PartialExecution {
    exec(
        vec![
            vec![rel_w(1, "x"), rel_w(2, "y"), rel_w(3, "x")],
            vec![acq_r(4, "y"), rel_w(5, "x"), acq_r(6, "x")],
        ],
        &[(4, 2), (6, 3)],
    )
}

fn fig1_incons() -> PartialExecution {
    exec(
        vec![
            vec![rel_w(1, "x"), rel_w(2, "y"), rel_w(3, "x")],
            vec![acq_r(4, "y"), rel_w(5, "x"), acq_r(6, "x")],
        ],
        &[(4, 2), (6, 1)],
    )
}

/// 2a: SRA-consistent, SC-inconsistent.
fn fig2a() -> PartialExecution {
    exec(
        vec![
            vec![rel_w(1, "x"), rel_w(2, "x"), rel_w(3, "y"), acq_r(4, "y")],
            vec![rel_w(5, "y"), acq_r(6, "x")],
        ],
        &[(4, 5), (6, 1)],
    )
}

/// 2b: RA-consistent, SRA-inconsistent.
fn fig2b() -> PartialExecution {
    exec(
        vec![
            vec![rel_w(1, "y"), rel_w(2, "x"), acq_r(3, "x")],
            vec![rel_w(4, "x"), rel_w(5, "y"), acq_r(6, "y")],
        ],
        &[(3, 4), (6, 1)],
    )
}

/// 2c: WRA-consistent, RA-inconsistent (cross reads of overwritten writes).
fn fig2c() -> PartialExecution {
    exec(
        vec![
            vec![rel_w(1, "x"), acq_r(2, "x")],
            vec![rel_w(3, "x"), acq_r(4, "x")],
        ],
        &[(2, 3), (4, 1)],
    )
}

/// 2d: WRA-inconsistent (stale read after observing a later write via hb).
fn fig2d() -> PartialExecution {
    exec(
        vec![
            vec![rel_w(1, "x"), rel_w(2, "x"), rel_w(3, "y")],
            vec![acq_r(4, "y"), acq_r(5, "x")],
        ],
        &[(4, 3), (5, 1)],
    )
}

fn assert_verdict(v: &Verdict, expect: bool, what: &str) {
    assert_eq!(v.consistent, expect, "{what}: {:?}", v.reason);
}

#[test]
fn wra_on_figures() {
    assert_verdict(&check_wra(&fig1_mp()), true, "fig1-mp wra");
    assert_verdict(&check_wra(&fig2c()), true, "fig2c wra");
    assert_verdict(&check_wra(&fig2d()), false, "fig2d wra");
    assert_verdict(&check_wra(&fig1_incons()), false, "fig1-incons wra");
}

#[test]
fn ra_on_figures() {
    assert_verdict(&check_ra(&fig1_mp()), true, "fig1-mp ra");
    assert_verdict(&check_ra(&fig1_incons()), false, "fig1-incons ra");
    assert_verdict(&check_ra(&fig2b()), true, "fig2b ra");
    assert_verdict(&check_ra(&fig2c()), false, "fig2c ra");
    assert_verdict(&check_ra(&fig2d()), false, "fig2d ra");
}

#[test]
fn sra_normw_on_figures() {
    let v = check_sra_normw(&fig2a()).unwrap();
    assert_verdict(&v, true, "fig2a sra");
    assert!(v.witness_mo.is_some());
    assert_verdict(&check_sra_normw(&fig2b()).unwrap(), false, "fig2b sra");
    assert_verdict(&check_sra_normw(&fig1_mp()).unwrap(), true, "fig1-mp sra");
    assert_verdict(&check_sra_normw(&fig1_incons()).unwrap(), false, "fig1-incons sra");
}

#[test]
fn sra_full_matches_normw_without_rmws() {
    for x in [fig1_mp(), fig1_incons(), fig2a(), fig2b(), fig2c(), fig2d()] {
        let a = check_sra_normw(&x).unwrap().consistent;
        let b = check_sra_full(&x, SraSearchConfig::default()).unwrap().consistent;
        assert_eq!(a, b);
    }
}

#[test]
fn sra_normw_rejects_rmws() {
    let x = exec(
        vec![vec![rel_w(1, "x"), EventSpec::rmw(2, "x", MemoryOrder::AcqRel)]],
        &[(2, 1)],
    );
    assert!(matches!(check_sra_normw(&x), Err(CheckError::RmwPresent)));
    assert_verdict(&check_sra_full(&x, SraSearchConfig::default()).unwrap(), true, "rmw sra");
}

#[test]
fn relaxed_accepts_wra_rejections() {
    // fig2d is WRA-inconsistent but Relaxed-consistent: hb = po sees no
    // cross-thread ordering.
    assert_verdict(&check_relaxed(&fig2d()), true, "fig2d relaxed");
    // Cross-thread staleness is invisible with hb = po.
    assert_verdict(&check_relaxed(&fig1_incons()), true, "fig1-incons relaxed");
    // Same-thread staleness is not.
    let x = exec(
        vec![vec![rel_w(1, "x"), rel_w(2, "x"), acq_r(3, "x")]],
        &[(3, 1)],
    );
    assert_verdict(&check_relaxed(&x), false, "same-thread stale relaxed");
}

#[test]
fn weak_atomicity_violations_reported() {
    let x = exec(
        vec![
            vec![rel_w(1, "x")],
            vec![EventSpec::rmw(2, "x", MemoryOrder::AcqRel)],
            vec![EventSpec::rmw(3, "x", MemoryOrder::AcqRel)],
        ],
        &[(2, 1), (3, 1)],
    );
    for v in [check_wra(&x), check_ra(&x), check_relaxed(&x)] {
        assert_verdict(&v, false, "two rmws one writer");
        assert!(matches!(v.reason, Some(Reason::WeakAtomicity { .. })));
    }
}

#[test]
fn porf_cycle_reported() {
    let x = exec(
        vec![
            vec![acq_r(1, "x"), rel_w(2, "y")],
            vec![acq_r(3, "y"), rel_w(4, "x")],
        ],
        &[(1, 4), (3, 2)],
    );
    for v in [
        check_wra(&x),
        check_ra(&x),
        check_rc20(&x),
        check_relaxed(&x),
        check_sra_normw(&x).unwrap(),
    ] {
        assert_verdict(&v, false, "porf cycle");
        assert!(matches!(v.reason, Some(Reason::PorfCycle { .. })));
    }
}

#[test]
fn witness_round_trip_rc20() {
    for x in [fig1_mp(), fig2a(), fig2b(), fig2c()] {
        let xs = exec_core::strengthen_modes(&x);
        let v = check_rc20(&xs);
        if !v.consistent {
            continue;
        }
        let pm = v.partial_mo.clone().unwrap();
        assert!(rc20_minimally_coherent(&xs, &pm));
        let w = complete_witness_rc20(&xs, &pm).unwrap();
        let report = axioms_oracle::eval_model(&xs, &w, Model::Rc20);
        assert!(report.all_hold(), "witness fails axioms: {report:?}");
    }
}

#[test]
fn checkers_match_oracle_on_small_executions() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..400 {
        let Some(x) = random_exec(&mut rng) else { continue };
        checked += 1;
        for model in [Model::Wra, Model::Ra, Model::Rc20, Model::Relaxed, Model::Sra] {
            let got = match model {
                Model::Wra => check_wra(&x).consistent,
                Model::Ra => check_ra(&x).consistent,
                Model::Rc20 => check_rc20(&x).consistent,
                Model::Relaxed => check_relaxed(&x).consistent,
                Model::Sra => {
                    check_sra_full(&x, SraSearchConfig::default()).unwrap().consistent
                }
                _ => unreachable!(),
            };
            let want =
                axioms_oracle::oracle_consistent(&x, model, axioms_oracle::DEFAULT_ORACLE_LIMIT)
                    .unwrap()
                    .is_some();
            assert_eq!(got, want, "model {model:?} on {x:?}");
        }
    }
    assert!(checked > 200);
}

/// Tiny random executions (≤8 events, 2 threads, ≤2 locs) with porf kept
/// acyclic by only reading from already-emitted writes.
fn random_exec(rng: &mut impl rand::Rng) -> Option<PartialExecution> {
    let n = rng.gen_range(3..=8);
    let locs = ["x", "y"];
    let mut threads: Vec<Vec<EventSpec>> = vec![Vec::new(), Vec::new()];
    let mut rf = HashMap::new();
    let mut writes: Vec<(u64, usize)> = Vec::new();
    let mut consumed: std::collections::HashSet<u64> = Default::default();
    for id in 1..=n {
        let t = rng.gen_range(0..2);
        let loc = rng.gen_range(0..2);
        let ord = if rng.gen_bool(0.5) { MemoryOrder::Rel } else { MemoryOrder::Rlx };
        let roll: f64 = rng.gen();
        if roll < 0.45 || writes.iter().all(|&(_, l)| l != loc) {
            threads[t].push(EventSpec::write(id, locs[loc], ord));
            writes.push((id, loc));
        } else {
            let cands: Vec<u64> = writes
                .iter()
                .filter(|&&(_, l)| l == loc)
                .map(|&(w, _)| w)
                .collect();
            let w = cands[rng.gen_range(0..cands.len())];
            if roll < 0.7 && !consumed.contains(&w) {
                threads[t].push(EventSpec::rmw(id, locs[loc], MemoryOrder::AcqRel));
                rf.insert(id, w);
                consumed.insert(w);
                writes.push((id, loc));
            } else {
                let rord = if ord == MemoryOrder::Rel { MemoryOrder::Acq } else { MemoryOrder::Rlx };
                threads[t].push(EventSpec::read(id, locs[loc], rord));
                rf.insert(id, w);
            }
        }
    }
    PartialExecution::new(threads, rf).ok()
}
