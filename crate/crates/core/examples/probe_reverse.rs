// Hypothesis probe: what ratio does the m=8 n=50 cell give when the
// block's jobs are matched to the retrieved machines in reverse order
// (largest job onto the most loaded of the retrieved set)?
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use blocksched::experiment::{cell_instance, ProcDist};
use blocksched::graph::{BFn, RngSeed};
use blocksched::model::{makespan, Instance, Schedule};

fn greedy_reversed(inst: &Instance) -> Schedule {
    let m = inst.m();
    let proc = inst.proc();
    let mut heap: BinaryHeap<Reverse<(u64, u32)>> = (0..m as u32).map(|i| Reverse((0u64, i))).collect();
    let mut assign = vec![u32::MAX; inst.n()];
    for bi in inst.graph.preorder_blocks() {
        let block = &inst.graph.blocks()[bi as usize];
        let parent = inst.graph.block_parent_cut(bi);
        let mut jobs: Vec<u32> = block.iter().copied().filter(|&v| parent != Some(v)).collect();
        jobs.sort_by_key(|&v| (Reverse(proc[v as usize]), v));
        let mut taken: Vec<(u64, u32)> = (0..block.len()).map(|_| { let Reverse(e) = heap.pop().unwrap(); e }).collect();
        if let Some(p) = parent {
            let pm = assign[p as usize];
            if let Some(idx) = taken.iter().position(|&(_, mi)| mi == pm) {
                let back = taken.remove(idx);
                heap.push(Reverse(back));
            } else {
                let back = taken.pop().unwrap();
                heap.push(Reverse(back));
            }
        }
        taken.reverse(); // biggest job onto the most loaded retrieved machine
        for (&job, &(load, mi)) in jobs.iter().zip(taken.iter()) {
            assign[job as usize] = mi;
            heap.push(Reverse((load + proc[job as usize], mi)));
        }
    }
    Schedule::new(assign)
}

fn main() {
    for (m, n) in [(4usize, 50usize), (8, 50), (8, 100)] {
        let mut ratios = 0f64;
        for i in 0..25u64 {
            let inst = cell_instance(n, m, BFn::Min, ProcDist::P0, None, RngSeed(1).derive(9, i)).unwrap();
            let sched = greedy_reversed(&inst);
            assert!(blocksched::model::is_feasible(&inst, &sched));
            let c = makespan(&inst, &sched).to_f64();
            let total: u64 = inst.proc().iter().sum();
            ratios += c / (total as f64 / m as f64);
        }
        println!("reversed matching m={} n={}: {:.3}", m, n, ratios / 25.0);
    }
}
