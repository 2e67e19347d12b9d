use blocksched::experiment::*;
use blocksched::graph::BFn;

fn main() {
    let cfg = ExperimentConfig {
        ns: vec![50, 100],
        ms: vec![4, 6, 8],
        bs: vec![BFn::Min],
        procs: vec![ProcDist::P0],
        alg: Algorithm::Greedy,
        eps: None,
        speeds: None,
        instances: 25,
        timeout_ms: None,
        mem_mb: None,
        seed: 20240809,
        reference: Reference::Lb,
        oracle_cap: 12,
    };
    let rows = run_experiment(&cfg).unwrap();
    print!("{}", to_csv(&rows));
}
