use blocksched::budget::Budget;
use blocksched::graph::{b_function, generate_block_graph, random_partition, BFn, RngSeed};
use blocksched::model::{Instance, MachineEnv, ExactTime};
use blocksched::treewidth::fptas;

fn main() {
    let (n, m) = (40usize, 4usize);
    let b = b_function(n, m, BFn::Min);
    let parts = random_partition(n + b - 1, b, 2, m, RngSeed(42)).unwrap();
    let t = generate_block_graph(&parts, RngSeed(7)).unwrap();
    let inst = Instance::new(t, MachineEnv::Identical { m }, Some(vec![1; n])).unwrap();
    let eps = ExactTime::ratio(1, n as u64 + 1);
    let start = std::time::Instant::now();
    let (sched, c) = fptas(&inst, &eps, &Budget::unlimited()).unwrap();
    println!("n={} m={} blocks={} C={} in {:?}", n, m, b, c, start.elapsed());
    assert!(blocksched::model::is_feasible(&inst, &sched));
}
