//! Greedy 2-approximation for identical machines under a block conflict
//! graph, in O(n log m): pre-order over the block-cut tree, each block's
//! jobs (sorted by non-increasing time) matched to the least-loaded
//! machines, skipping the machine that holds the block's parent cut-vertex.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::budget::SolveError;
use crate::model::{Instance, MachineEnv, Schedule};

/// Greedy schedule; makespan is at most twice the optimum.
pub fn greedy_schedule(inst: &Instance) -> Result<Schedule, SolveError> {
    Ok(greedy_schedule_trace(inst)?.0)
}

/// Greedy schedule plus the machine loads after each processed block (used
/// by the invariant checks).
pub fn greedy_schedule_trace(inst: &Instance) -> Result<(Schedule, Vec<Vec<u64>>), SolveError> {
    if !matches!(inst.env, MachineEnv::Identical { .. }) {
        return Err(SolveError::WrongEnvironment(
            "identical machines required".into(),
        ));
    }
    let m = inst.m();
    if inst.graph.max_block_size() > m {
        return Err(SolveError::Infeasible(format!(
            "largest block has {} jobs but only {} machines",
            inst.graph.max_block_size(),
            m
        )));
    }
    let proc = inst.proc();
    let mut heap: BinaryHeap<Reverse<(u64, u32)>> =
        (0..m as u32).map(|i| Reverse((0u64, i))).collect();
    let mut assign = vec![u32::MAX; inst.n()];
    let mut trace = Vec::with_capacity(inst.graph.block_count());
    let mut loads = vec![0u64; m];

    for bi in inst.graph.preorder_blocks() {
        let block = &inst.graph.blocks()[bi as usize];
        let parent = inst.graph.block_parent_cut(bi);
        // jobs by non-increasing p_j, ties by lower id; parent removed
        let mut jobs: Vec<u32> = block
            .iter()
            .copied()
            .filter(|&v| parent != Some(v))
            .collect();
        jobs.sort_by_key(|&v| (Reverse(proc[v as usize]), v));

        let mut taken: Vec<(u64, u32)> = Vec::with_capacity(block.len());
        for _ in 0..block.len() {
            let Reverse(entry) = heap.pop().expect("m >= |B| machines available");
            taken.push(entry);
        }
        if let Some(p) = parent {
            let pm = assign[p as usize];
            debug_assert_ne!(pm, u32::MAX, "parent cut-vertex scheduled earlier");
            if let Some(idx) = taken.iter().position(|&(_, mi)| mi == pm) {
                let back = taken.remove(idx);
                heap.push(Reverse(back));
            } else {
                let back = taken.pop().expect("non-empty");
                heap.push(Reverse(back));
            }
        }
        debug_assert_eq!(taken.len(), jobs.len());
        for (&job, &(load, mi)) in jobs.iter().zip(taken.iter()) {
            let new_load = load + proc[job as usize];
            assign[job as usize] = mi;
            loads[mi as usize] = new_load;
            heap.push(Reverse((new_load, mi)));
        }
        trace.push(loads.clone());
    }
    Ok((Schedule::new(assign), trace))
}

/// Greedy on a unit-time instance, plus the per-machine job-count bound
/// ceil(n/(m-1)) it is guaranteed to respect. Asserts the bound and the
/// slack condition on the number of machines strictly below it.
pub fn greedy_unit_load_bound(inst: &Instance) -> Result<(Schedule, u64), SolveError> {
    if !inst.is_unit() {
        return Err(SolveError::WrongEnvironment("unit jobs required".into()));
    }
    if inst.m() < 2 {
        return Err(SolveError::WrongEnvironment("m >= 2 required".into()));
    }
    let sched = greedy_schedule(inst)?;
    let n = inst.n() as u64;
    let m = inst.m() as u64;
    let bound = n.div_ceil(m - 1);
    let mut counts = vec![0u64; inst.m()];
    for &mi in &sched.assign {
        counts[mi as usize] += 1;
    }
    for &c in &counts {
        assert!(c <= bound, "unit-greedy bound violated: {} > {}", c, bound);
    }
    let r = n % (m - 1);
    let slack = counts.iter().filter(|&&c| c < bound).count() as u64;
    let required = if r == 0 { 1 } else { m - r };
    assert!(
        slack >= required,
        "slack machines {} below required {}",
        slack,
        required
    );
    Ok((sched, bound))
}
