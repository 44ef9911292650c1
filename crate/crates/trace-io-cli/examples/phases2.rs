use std::time::Instant;
fn best(reps: usize, mut f: impl FnMut()) -> f64 {
    let mut b = f64::INFINITY;
    for _ in 0..reps {
        let t0 = Instant::now();
        f();
        b = b.min(t0.elapsed().as_secs_f64() * 1e6);
    }
    b
}
fn main() {
    for n in [10_000usize, 40_000, 160_000] {
        let x = generators::gen_preset("fixed-chain-wr", n, 4).unwrap();
        let topo = best(15, || { exec_core::relations::porf_topo_order_dense(&x).unwrap(); });
        let (_, dord) = exec_core::relations::porf_topo_order_dense(&x).unwrap();
        let hb = best(15, || { hb_engine::compute_hb_dense_order(&x, &dord); });
        let wa = best(15, || { exec_core::find_weak_atomicity_violation(&x); });
        let ch = best(15, || { exec_core::build_rf_chains(&x).unwrap(); });
        let ol = best(15, || { hb_engine::ObserverLists::new(&x); });
        let full = best(15, || { assert!(checkers::check_rc20(&x).consistent); });
        println!("n={n} topo={topo:.0} hb={hb:.0} wa={wa:.0} chains={ch:.0} lists={ol:.0} full={full:.0} rest={:.0}", full-topo-hb-wa-ch-ol);
    }
}
