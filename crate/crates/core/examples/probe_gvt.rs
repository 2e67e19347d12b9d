use blocksched::experiment::*;
use blocksched::graph::BFn;

fn main() {
    let cfg = ExperimentConfig {
        ns: vec![15, 20, 25, 30, 35, 40],
        ms: vec![4],
        bs: vec![BFn::Min],
        procs: vec![ProcDist::Unit],
        alg: Algorithm::Greedy,
        eps: None,
        speeds: None,
        instances: 25,
        timeout_ms: None,
        mem_mb: None,
        seed: 3,
        reference: Reference::Tree,
        oracle_cap: 12,
    };
    let rows = run_experiment(&cfg).unwrap();
    for r in rows {
        println!("m=4 n={} bmin unit ratio={:.3} (paper: n15 1.09/1.14, n20 1.03/1.18, n25 1.08, n30 1.08, n35 1.08/1.11, n40 1.12/1.17)", r.n, r.mean_ratio.unwrap());
    }
}
