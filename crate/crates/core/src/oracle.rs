//! Exhaustive branch-and-bound exact solver for all three machine
//! environments; the ground truth for the approximation tests.
//!
//! Shares only the instance/schedule types with the solver modules.

use crate::budget::SolveError;
use crate::model::{makespan, ExactTime, Instance, MachineEnv, Schedule};

pub const DEFAULT_CAP: usize = 12;

/// Optimal schedule and makespan by depth-first assignment in block-cut tree
/// pre-order, pruning on conflicts and on partial loads meeting the
/// incumbent. Instances larger than [`DEFAULT_CAP`] jobs are rejected.
pub fn brute_force(inst: &Instance) -> Result<(Schedule, ExactTime), SolveError> {
    brute_force_with_cap(inst, DEFAULT_CAP)
}

pub fn brute_force_with_cap(
    inst: &Instance,
    cap: usize,
) -> Result<(Schedule, ExactTime), SolveError> {
    let n = inst.n();
    if n > cap {
        return Err(SolveError::CapExceeded { n, cap });
    }
    if inst.graph.max_block_size() > inst.m() {
        return Err(SolveError::Infeasible(format!(
            "largest block has {} jobs but only {} machines",
            inst.graph.max_block_size(),
            inst.m()
        )));
    }
    if n == 0 {
        return Ok((Schedule::new(Vec::new()), ExactTime::zero()));
    }

    let search = Search::new(inst);
    let (assign, _) = search.run();
    let sched = Schedule::new(assign);
    let opt = makespan(inst, &sched);
    Ok((sched, opt))
}

struct Search<'a> {
    inst: &'a Instance,
    m: usize,
    /// Jobs in block-cut tree pre-order (cut-vertices once, at first visit).
    order: Vec<u32>,
    /// For order position i: earlier positions conflicting with the job.
    earlier_conflicts: Vec<Vec<usize>>,
    /// Scaled time of order[i] on each machine.
    times: Vec<Vec<u64>>,
    /// Machine class fingerprints for symmetry breaking: machines in the
    /// same class are interchangeable while still empty.
    class_of: Vec<usize>,
    /// Remaining scaled work (identical machines only).
    suffix_total: Vec<u64>,
    global_lb: u64,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance) -> Self {
        let m = inst.m();
        let scale = inst.time_scale();
        let mut order = Vec::with_capacity(inst.n());
        let mut seen = vec![false; inst.n()];
        for b in inst.graph.preorder_blocks() {
            for &v in &inst.graph.blocks()[b as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    order.push(v);
                }
            }
        }
        let pos_of: Vec<usize> = {
            let mut p = vec![0usize; inst.n()];
            for (i, &v) in order.iter().enumerate() {
                p[v as usize] = i;
            }
            p
        };
        let mut earlier_conflicts = vec![Vec::new(); order.len()];
        for (i, &v) in order.iter().enumerate() {
            for &b in inst.graph.vertex_blocks(v) {
                for &u in &inst.graph.blocks()[b as usize] {
                    if u != v && pos_of[u as usize] < i {
                        earlier_conflicts[i].push(pos_of[u as usize]);
                    }
                }
            }
            earlier_conflicts[i].sort_unstable();
            earlier_conflicts[i].dedup();
        }
        let times: Vec<Vec<u64>> = order
            .iter()
            .map(|&v| {
                (0..m)
                    .map(|mi| inst.scaled_time(scale, mi, v as usize))
                    .collect()
            })
            .collect();
        let class_of: Vec<usize> = match &inst.env {
            MachineEnv::Identical { .. } => vec![0; m],
            MachineEnv::Uniform { speeds, .. } => {
                let mut classes: Vec<u64> = Vec::new();
                (0..m)
                    .map(|i| {
                        if let Some(c) = classes.iter().position(|&s| s == speeds[i]) {
                            c
                        } else {
                            classes.push(speeds[i]);
                            classes.len() - 1
                        }
                    })
                    .collect()
            }
            MachineEnv::Unrelated { times, .. } => {
                let mut cols: Vec<Vec<u64>> = Vec::new();
                (0..m)
                    .map(|i| {
                        let col: Vec<u64> = (0..inst.n()).map(|j| times[i][j]).collect();
                        if let Some(c) = cols.iter().position(|x| *x == col) {
                            c
                        } else {
                            cols.push(col);
                            cols.len() - 1
                        }
                    })
                    .collect()
            }
        };
        let identical = matches!(inst.env, MachineEnv::Identical { .. });
        let mut suffix_total = vec![0u64; order.len() + 1];
        if identical {
            for i in (0..order.len()).rev() {
                suffix_total[i] = suffix_total[i + 1] + times[i][0];
            }
        }
        let global_lb = match &inst.env {
            MachineEnv::Identical { .. } => {
                let total = suffix_total[0];
                let p_max = times.iter().map(|t| t[0]).max().unwrap_or(0);
                p_max.max(total.div_ceil(m as u64))
            }
            _ => {
                // every job runs somewhere: max over jobs of its fastest time
                times
                    .iter()
                    .map(|t| t.iter().copied().min().unwrap_or(0))
                    .max()
                    .unwrap_or(0)
            }
        };
        Search {
            inst,
            m,
            order,
            earlier_conflicts,
            times,
            class_of,
            suffix_total,
            global_lb,
        }
    }

    fn run(&self) -> (Vec<u32>, u64) {
        let mut assign_by_pos = vec![u32::MAX; self.order.len()];
        let mut loads = vec![0u64; self.m];
        let mut best_assign = vec![u32::MAX; self.order.len()];
        let mut best = u64::MAX;
        self.dfs(0, &mut assign_by_pos, &mut loads, &mut best_assign, &mut best);
        let mut assign = vec![0u32; self.inst.n()];
        for (i, &v) in self.order.iter().enumerate() {
            assign[v as usize] = best_assign[i];
        }
        (assign, best)
    }

    fn dfs(
        &self,
        pos: usize,
        assign: &mut Vec<u32>,
        loads: &mut Vec<u64>,
        best_assign: &mut Vec<u32>,
        best: &mut u64,
    ) {
        if *best == self.global_lb {
            return; // incumbent is provably optimal
        }
        if pos == self.order.len() {
            let cur = loads.iter().copied().max().unwrap_or(0);
            if cur < *best {
                *best = cur;
                best_assign.clone_from(assign);
            }
            return;
        }
        if matches!(self.inst.env, MachineEnv::Identical { .. }) {
            // average-load bound over the remaining work
            let assigned: u64 = loads.iter().sum();
            let avg = (assigned + self.suffix_total[pos]).div_ceil(self.m as u64);
            if avg >= *best {
                return;
            }
        }
        let mut forbidden = vec![false; self.m];
        for &e in &self.earlier_conflicts[pos] {
            forbidden[assign[e] as usize] = true;
        }
        // try machines by (resulting load, id); among empty machines of one
        // class only the first is tried (interchangeable until first use)
        let mut cands: Vec<(u64, u32)> = Vec::with_capacity(self.m);
        let mut seen_empty_class = vec![false; self.m];
        for mi in 0..self.m {
            if forbidden[mi] {
                continue;
            }
            if loads[mi] == 0 {
                let c = self.class_of[mi];
                if seen_empty_class[c] {
                    continue;
                }
                seen_empty_class[c] = true;
            }
            cands.push((loads[mi] + self.times[pos][mi], mi as u32));
        }
        cands.sort_unstable();
        for (new_load, mi) in cands {
            if new_load >= *best {
                continue;
            }
            let mi_us = mi as usize;
            let old = loads[mi_us];
            loads[mi_us] = new_load;
            assign[pos] = mi;
            self.dfs(pos + 1, assign, loads, best_assign, best);
            loads[mi_us] = old;
            assign[pos] = u32::MAX;
            if *best == self.global_lb {
                return;
            }
        }
    }
}
