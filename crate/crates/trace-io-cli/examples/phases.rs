use std::time::Instant;
fn best(reps: usize, mut f: impl FnMut()) -> f64 {
    let mut b = f64::INFINITY;
    for _ in 0..reps {
        let t0 = Instant::now();
        f();
        b = b.min(t0.elapsed().as_secs_f64() * 1e3);
    }
    b
}
fn main() {
    let runs: [(&str, &str, fn(&exec_core::PartialExecution)); 3] = [
        ("wra", "fixed-chain-rw", |x| assert!(checkers::check_wra(x).consistent)),
        ("sra-normw", "new-read-events", |x| assert!(checkers::check_sra_normw(x).unwrap().consistent)),
        ("rc20", "fixed-chain-wr", |x| assert!(checkers::check_rc20(x).consistent)),
    ];
    for (name, preset, f) in runs {
        let mut prev = f64::INFINITY;
        for n in [10_000usize, 40_000, 160_000] {
            let x = generators::gen_preset(preset, n, 4).unwrap();
            let t = best(15, || f(&x));
            println!("{name} n={n} t={t:.2}ms ratio={:.2}", t / prev);
            prev = t;
        }
    }
}
