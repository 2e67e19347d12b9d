use blocksched::experiment::*;
use blocksched::graph::BFn;

fn main() {
    let expected = [((4, 50), 1.06), ((4, 100), 1.03), ((6, 50), 1.07), ((6, 100), 1.04), ((8, 50), 1.14), ((8, 100), 1.05)];
    for seed in [1u64, 2, 3, 5, 7, 11, 42, 99, 999, 2025] {
        let cfg = ExperimentConfig {
            ns: vec![50, 100],
            ms: vec![4, 6, 8],
            bs: vec![BFn::Min],
            procs: vec![ProcDist::P0],
            alg: Algorithm::Greedy,
            eps: None, speeds: None,
            instances: 25, timeout_ms: None, mem_mb: None,
            seed, reference: Reference::Lb, oracle_cap: 12,
        };
        let rows = run_experiment(&cfg).unwrap();
        let mut worst: f64 = 0.0;
        let mut parts = Vec::new();
        for r in &rows {
            let e = expected.iter().find(|((m, n), _)| *m == r.m && *n == r.n).unwrap().1;
            let d = (r.mean_ratio.unwrap() - e).abs();
            worst = worst.max(d);
            parts.push(format!("m{}n{}:{:.3}(d{:.3})", r.m, r.n, r.mean_ratio.unwrap(), d));
        }
        println!("seed {:>5} worst {:.3} {}", seed, worst, parts.join(" "));
    }
}
