use blocksched::experiment::*;
use blocksched::graph::BFn;

fn main() {
    for seed in [1u64, 7, 42, 20240809, 999] {
        let cfg = ExperimentConfig {
            ns: vec![50],
            ms: vec![8],
            bs: vec![BFn::Min, BFn::Avg, BFn::Max],
            procs: vec![ProcDist::P0],
            alg: Algorithm::Greedy,
            eps: None,
            speeds: None,
            instances: 25,
            timeout_ms: None,
            mem_mb: None,
            seed,
            reference: Reference::Lb,
            oracle_cap: 12,
        };
        let rows = run_experiment(&cfg).unwrap();
        let vals: Vec<String> = rows.iter().map(|r| format!("{}={:.3}", r.b, r.mean_ratio.unwrap())).collect();
        println!("seed {}: m=8 n=50 {}", seed, vals.join(" "));
    }
}
