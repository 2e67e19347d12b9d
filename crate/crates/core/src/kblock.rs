//! Uniform machines with a bounded number of blocks: a k-approximation that
//! scans all cut-vertex assignments, and a configuration PTAS that rounds
//! sizes to powers of (1+eps), processes machines by non-decreasing
//! capacity, and tabulates the multisets of still-unscheduled jobs.
//!
//! Rounded sizes are kept as integer exponents of (1+eps); every numeric
//! comparison goes through exact rational powering.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::budget::{Budget, SolveError};
use crate::model::{is_feasible, makespan, ExactTime, Instance, MachineEnv, Schedule};

/// Residual state after the first machines were filled: per block the count
/// of unscheduled small jobs and of unscheduled jobs per visible size
/// exponent, plus one flag per still-unscheduled cut-vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Configuration {
    /// Unscheduled simplicial jobs with rounded size below the basis.
    pub small: Vec<u32>,
    /// window[s][off]: unscheduled simplicial jobs of block s with size
    /// exponent basis + off, off in 0..=tau.
    pub window: Vec<Vec<u32>>,
    /// flags[c] = the c-th cut-vertex is not scheduled yet.
    pub flags: Vec<bool>,
}

impl Configuration {
    pub fn is_zero(&self) -> bool {
        self.small.iter().all(|&c| c == 0)
            && self.window.iter().all(|w| w.iter().all(|&c| c == 0))
            && self.flags.iter().all(|&f| !f)
    }
}

/// Per-machine capacity rounded up to a power of (1+eps), in processing
/// order (non-decreasing capacity), with the window basis per machine.
#[derive(Debug, Clone)]
pub struct Capacity {
    /// Original machine ids sorted by non-decreasing capacity.
    pub order: Vec<usize>,
    /// Capacity exponents e_i (c_i = (1+eps)^{e_i}), parallel to `order`.
    pub exps: Vec<i64>,
    /// Window bases l_i = max(e_i - tau, 0), parallel to `order`.
    pub bases: Vec<i64>,
}

/// Exact powers of (1+eps) with a cache for nonnegative exponents.
struct Pows {
    base: BigRational,
    cache: std::cell::RefCell<Vec<BigRational>>,
}

impl Pows {
    fn new(eps: &ExactTime) -> Self {
        Pows {
            base: BigRational::one() + eps.as_rational(),
            cache: std::cell::RefCell::new(vec![BigRational::one()]),
        }
    }

    fn pow(&self, e: i64) -> BigRational {
        if e >= 0 {
            let mut cache = self.cache.borrow_mut();
            while (cache.len() as i64) <= e {
                let next = cache.last().unwrap() * &self.base;
                cache.push(next);
            }
            cache[e as usize].clone()
        } else {
            BigRational::one() / self.pow(-e)
        }
    }

    /// Largest e with (1+eps)^e <= x, for x >= 1.
    fn floor_log(&self, x: &BigRational) -> i64 {
        debug_assert!(*x >= BigRational::one());
        let mut e = 0i64;
        while self.pow(e + 1) <= *x {
            e += 1;
        }
        e
    }

    /// Smallest e with (1+eps)^e >= x, for x > 0.
    fn ceil_log(&self, x: &BigRational) -> i64 {
        let mut e = 0i64;
        if self.pow(e) >= *x {
            while e > i64::MIN && self.pow(e - 1) >= *x {
                e -= 1;
            }
            e
        } else {
            while self.pow(e) < *x {
                e += 1;
            }
            e
        }
    }
}

/// For every valid cut-vertex assignment, fill each block greedily (largest
/// jobs to the fastest machines, skipping machines holding the block's
/// cut-vertices) and keep the best schedule. The result is within a factor
/// of the block count of the optimum.
pub fn k_approx(inst: &Instance, budget: &Budget) -> Result<(Schedule, ExactTime), SolveError> {
    let MachineEnv::Uniform { .. } = &inst.env else {
        return Err(SolveError::WrongEnvironment(
            "uniform machines required".into(),
        ));
    };
    let m = inst.m();
    if inst.graph.max_block_size() > m {
        return Err(SolveError::Infeasible(format!(
            "largest block has {} jobs but only {} machines",
            inst.graph.max_block_size(),
            m
        )));
    }
    if inst.n() == 0 {
        return Ok((Schedule::new(Vec::new()), ExactTime::zero()));
    }
    let tree = &inst.graph;
    let proc = inst.proc();
    let cuts: Vec<u32> = tree.cut_vertices().collect();
    let blocks_order = tree.preorder_blocks();

    let mut best: Option<(Schedule, ExactTime)> = None;
    let mut machines = vec![0u32; cuts.len()];
    enumerate_cut_assignments(tree, &cuts, m, 0, &mut machines, budget, &mut |f| {
        let mut assign = vec![u32::MAX; inst.n()];
        for (ci, &v) in cuts.iter().enumerate() {
            assign[v as usize] = f[ci];
        }
        for &b in &blocks_order {
            let mut jobs: Vec<u32> = tree.blocks()[b as usize]
                .iter()
                .copied()
                .filter(|&v| !tree.is_cut(v))
                .collect();
            jobs.sort_by_key(|&v| (std::cmp::Reverse(proc[v as usize]), v));
            let cut_machines: Vec<u32> = tree.blocks()[b as usize]
                .iter()
                .filter(|&&v| tree.is_cut(v))
                .map(|&v| assign[v as usize])
                .collect();
            let mut skip = 0usize;
            for (i, &job) in jobs.iter().enumerate() {
                while cut_machines.contains(&((i + skip) as u32)) {
                    skip += 1;
                }
                assign[job as usize] = (i + skip) as u32;
            }
        }
        let sched = Schedule::new(assign);
        debug_assert!(is_feasible(inst, &sched));
        let c = makespan(inst, &sched);
        if best.as_ref().is_none_or(|(_, bc)| c < *bc) {
            best = Some((sched, c));
        }
    })?;
    best.ok_or_else(|| SolveError::Infeasible("no valid cut assignment".into()))
}

/// Mixed-radix scan over cut-vertex machine choices in block-cut tree
/// pre-order, pruning as soon as two adjacent cut-vertices collide.
fn enumerate_cut_assignments(
    tree: &crate::graph::BlockCutTree,
    cuts: &[u32],
    m: usize,
    pos: usize,
    machines: &mut Vec<u32>,
    budget: &Budget,
    emit: &mut impl FnMut(&[u32]),
) -> Result<(), SolveError> {
    if pos == cuts.len() {
        emit(machines);
        return Ok(());
    }
    budget.check_time()?;
    for mi in 0..m as u32 {
        let clash = (0..pos)
            .any(|e| machines[e] == mi && tree.conflicts(cuts[e], cuts[pos]));
        if clash {
            continue;
        }
        machines[pos] = mi;
        enumerate_cut_assignments(tree, cuts, m, pos + 1, machines, budget, emit)?;
    }
    Ok(())
}

/// Everything a core run exposes: the accepted schedule (if any) plus the
/// configuration sets per machine level, for the completeness checks.
pub struct CoreRun {
    pub accepted: Option<Schedule>,
    /// levels[i] = U_i for i in 0..=m.
    pub levels: Vec<Vec<Configuration>>,
    pub capacity: Capacity,
    pub tau: i64,
    /// Rounded size exponent per job.
    pub job_exp: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Pick {
    Small,
    Window(usize),
}

#[derive(Debug, Clone)]
struct Choice {
    per_block: Vec<Option<Pick>>,
    cut_ids: Vec<usize>,
}

/// Decide whether a schedule with rounded makespan at most C exists; an
/// accepted schedule has true makespan at most (1+eps)^2 * C.
pub fn ptas_core(
    inst: &Instance,
    c: &ExactTime,
    eps: &ExactTime,
    budget: &Budget,
) -> Result<Option<Schedule>, SolveError> {
    Ok(ptas_core_run(inst, c, eps, budget)?.accepted)
}

pub fn ptas_core_run(
    inst: &Instance,
    c: &ExactTime,
    eps: &ExactTime,
    budget: &Budget,
) -> Result<CoreRun, SolveError> {
    let MachineEnv::Uniform { speeds, .. } = &inst.env else {
        return Err(SolveError::WrongEnvironment(
            "uniform machines required".into(),
        ));
    };
    assert!(!eps.is_zero(), "eps must be positive");
    assert!(!c.is_zero(), "guess must be positive");
    let tree = &inst.graph;
    let proc = inst.proc();
    let n = inst.n();
    let m = inst.m();
    let k = tree.block_count();
    let pows = Pows::new(eps);

    // capacities rounded up to powers of (1+eps), machines by non-decreasing
    // capacity (stable on ties)
    let mut order: Vec<usize> = (0..m).collect();
    let exps_raw: Vec<i64> = (0..m)
        .map(|i| pows.ceil_log(&(c.as_rational() * BigRational::from_integer(BigInt::from(speeds[i])))))
        .collect();
    order.sort_by_key(|&i| (exps_raw[i], i));
    let exps: Vec<i64> = order.iter().map(|&i| exps_raw[i]).collect();

    // tau = ceil(log_{1+eps}(k / eps))
    let k_over_eps = BigRational::from_integer(BigInt::from(k as u64)) / eps.as_rational();
    let tau = pows.ceil_log(&k_over_eps).max(0);
    let bases: Vec<i64> = exps.iter().map(|&e| (e - tau).max(0)).collect();
    let capacity = Capacity { order: order.clone(), exps: exps.clone(), bases: bases.clone() };

    // rounded job sizes as exponents (p_j >= 1 so exponents are >= 0)
    let job_exp: Vec<i64> = (0..n)
        .map(|j| pows.floor_log(&BigRational::from_integer(BigInt::from(proc[j]))))
        .collect();

    // necessary condition: the largest rounded job must fit the largest
    // capacity, otherwise some job is never visited
    let max_exp = job_exp.iter().copied().max().unwrap_or(0);
    if n > 0 && (m == 0 || pows.pow(max_exp) > pows.pow(exps[m - 1])) {
        return Ok(CoreRun {
            accepted: None,
            levels: Vec::new(),
            capacity,
            tau,
            job_exp,
        });
    }

    let cuts: Vec<u32> = tree.cut_vertices().collect();
    let cut_index: BTreeMap<u32, usize> = cuts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // per block: exponent -> count of simplicial jobs
    let mut block_exp_counts: Vec<BTreeMap<i64, u32>> = vec![BTreeMap::new(); k];
    for j in 0..n {
        let v = j as u32;
        if tree.is_cut(v) {
            continue;
        }
        let b = tree.vertex_blocks(v)[0] as usize;
        *block_exp_counts[b].entry(job_exp[j]).or_insert(0) += 1;
    }
    // blocks of each cut-vertex, and which blocks a cut choice excludes
    let cut_blocks: Vec<Vec<usize>> = cuts
        .iter()
        .map(|&v| tree.vertex_blocks(v).iter().map(|&b| b as usize).collect())
        .collect();

    // U_0 at basis l_0 = 0: visible exponents 0..=tau
    let mut u0 = Configuration {
        small: vec![0; k],
        window: vec![vec![0; tau as usize + 1]; k],
        flags: vec![true; cuts.len()],
    };
    for (s, counts) in block_exp_counts.iter().enumerate() {
        for (&e, &cnt) in counts.range(0..=tau) {
            u0.window[s][e as usize] += cnt;
        }
    }

    let mut levels: Vec<Vec<Configuration>> = vec![vec![u0]];
    let mut backs: Vec<Vec<(usize, Choice)>> = vec![Vec::new()];

    let mut prev_basis = 0i64;
    let mut prev_top = tau; // highest visible exponent so far
    for i in 0..m {
        budget.check_time()?;
        let basis = bases[i];
        let cap_exp = exps[i];
        let cap_value = pows.pow(cap_exp);

        // jobs entering the window at this machine: exponents in
        // (prev_top, basis + tau]
        let mut entering_small: Vec<u32> = vec![0; k];
        let mut entering_window: Vec<Vec<u32>> = vec![vec![0; tau as usize + 1]; k];
        if prev_top < basis + tau {
            for (s, counts) in block_exp_counts.iter().enumerate() {
                for (&e, &cnt) in counts.range(prev_top + 1..=basis + tau) {
                    if e < basis {
                        entering_small[s] += cnt;
                    } else {
                        entering_window[s][(e - basis) as usize] += cnt;
                    }
                }
            }
        }

        let shift = basis - prev_basis;
        let convert = |u: &Configuration| -> Configuration {
            let mut out = Configuration {
                small: entering_small.clone(),
                window: entering_window.clone(),
                flags: u.flags.clone(),
            };
            for s in 0..k {
                out.small[s] += u.small[s];
                for off in 0..=tau {
                    let cnt = u.window[s][off as usize];
                    if cnt == 0 {
                        continue;
                    }
                    let new_off = off - shift;
                    if new_off < 0 {
                        out.small[s] += cnt;
                    } else {
                        out.window[s][new_off as usize] += cnt;
                    }
                }
            }
            out
        };

        let mut next: Vec<Configuration> = Vec::new();
        let mut next_back: Vec<(usize, Choice)> = Vec::new();
        let mut seen: BTreeMap<Configuration, usize> = BTreeMap::new();
        for (pi, u) in levels[i].iter().enumerate() {
            budget.check_time()?;
            let u = convert(u);
            // enumerate u' <= u: at most one job per block, cut-vertices
            // blocking all their blocks, total rounded size within capacity
            enumerate_subassignments(
                &u,
                &cuts,
                &cut_blocks,
                &job_exp,
                basis,
                tau,
                &cap_value,
                &pows,
                &mut |choice| {
                    let mut res = u.clone();
                    for (s, pick) in choice.per_block.iter().enumerate() {
                        match pick {
                            None => {}
                            Some(Pick::Small) => res.small[s] -= 1,
                            Some(Pick::Window(off)) => res.window[s][*off] -= 1,
                        }
                    }
                    for &ci in &choice.cut_ids {
                        res.flags[ci] = false;
                    }
                    if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(res.clone())
                    {
                        e.insert(next.len());
                        next.push(res);
                        next_back.push((pi, choice.clone()));
                    }
                },
            );
        }
        budget.alloc_entries(next.len())?;
        levels.push(next);
        backs.push(next_back);
        prev_basis = basis;
        prev_top = basis + tau;
    }

    let zero_idx = levels[m].iter().position(|u| u.is_zero());
    let accepted = zero_idx.map(|mut idx| {
        // walk the back-pointers and materialize concrete jobs
        let mut choices: Vec<Choice> = Vec::with_capacity(m);
        for i in (1..=m).rev() {
            let (pi, choice) = backs[i][idx].clone();
            choices.push(choice);
            idx = pi;
        }
        choices.reverse();
        let mut assign = vec![u32::MAX; n];
        let mut scheduled = vec![false; n];
        for (i, choice) in choices.iter().enumerate() {
            let machine = order[i] as u32;
            let basis = bases[i];
            for (s, pick) in choice.per_block.iter().enumerate() {
                let Some(pick) = pick else { continue };
                let job = (0..n as u32)
                    .find(|&j| {
                        !scheduled[j as usize]
                            && !tree.is_cut(j)
                            && tree.vertex_blocks(j)[0] as usize == s
                            && match pick {
                                Pick::Small => job_exp[j as usize] < basis,
                                Pick::Window(off) => job_exp[j as usize] == basis + *off as i64,
                            }
                    })
                    .expect("configuration counts match the job pool");
                scheduled[job as usize] = true;
                assign[job as usize] = machine;
            }
            for &ci in &choice.cut_ids {
                let v = cuts[ci];
                scheduled[v as usize] = true;
                assign[v as usize] = machine;
            }
        }
        debug_assert!(assign.iter().all(|&a| a != u32::MAX));
        let sched = Schedule::new(assign);
        debug_assert!(is_feasible(inst, &sched));
        sched
    });
    let _ = cut_index;
    Ok(CoreRun { accepted, levels, capacity, tau, job_exp })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_subassignments(
    u: &Configuration,
    cuts: &[u32],
    cut_blocks: &[Vec<usize>],
    job_exp: &[i64],
    basis: i64,
    tau: i64,
    cap_value: &BigRational,
    pows: &Pows,
    emit: &mut impl FnMut(&Choice),
) {
    let k = u.small.len();
    // choose the cut subset first (outer), then per-block picks
    let open_cuts: Vec<usize> = (0..cuts.len()).filter(|&ci| u.flags[ci]).collect();
    let mut subset: Vec<usize> = Vec::new();
    enumerate_cut_subsets(
        &open_cuts,
        cuts,
        cut_blocks,
        job_exp,
        cap_value,
        pows,
        0,
        &BigRational::from_integer(BigInt::from(0)),
        &mut subset,
        &mut |cut_ids, cut_load| {
            let blocked: Vec<bool> = {
                let mut b = vec![false; k];
                for &ci in cut_ids {
                    for &s in &cut_blocks[ci] {
                        b[s] = true;
                    }
                }
                b
            };
            let mut per_block: Vec<Option<Pick>> = vec![None; k];
            block_picks(
                u,
                &blocked,
                basis,
                tau,
                cap_value,
                pows,
                0,
                cut_load,
                &mut per_block,
                &mut |pb| {
                    emit(&Choice { per_block: pb.to_vec(), cut_ids: cut_ids.to_vec() });
                },
            );
        },
    );
}

#[allow(clippy::too_many_arguments)]
fn enumerate_cut_subsets(
    open: &[usize],
    cuts: &[u32],
    cut_blocks: &[Vec<usize>],
    job_exp: &[i64],
    cap_value: &BigRational,
    pows: &Pows,
    pos: usize,
    load: &BigRational,
    subset: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], &BigRational),
) {
    if pos == open.len() {
        emit(subset, load);
        return;
    }
    // skip this cut-vertex
    enumerate_cut_subsets(
        open, cuts, cut_blocks, job_exp, cap_value, pows, pos + 1, load, subset, emit,
    );
    // or take it, unless it shares a block with an already chosen one
    let ci = open[pos];
    let shares = subset
        .iter()
        .any(|&cj| cut_blocks[cj].iter().any(|s| cut_blocks[ci].contains(s)));
    if shares {
        return;
    }
    let size = pows.pow(job_exp[cuts[ci] as usize]);
    let new_load = load + &size;
    if new_load > *cap_value {
        return;
    }
    subset.push(ci);
    enumerate_cut_subsets(
        open, cuts, cut_blocks, job_exp, cap_value, pows, pos + 1, &new_load, subset, emit,
    );
    subset.pop();
}

#[allow(clippy::too_many_arguments)]
fn block_picks(
    u: &Configuration,
    blocked: &[bool],
    basis: i64,
    tau: i64,
    cap_value: &BigRational,
    pows: &Pows,
    s: usize,
    load: &BigRational,
    per_block: &mut Vec<Option<Pick>>,
    emit: &mut impl FnMut(&[Option<Pick>]),
) {
    if s == u.small.len() {
        emit(per_block);
        return;
    }
    // no job from this block
    per_block[s] = None;
    block_picks(u, blocked, basis, tau, cap_value, pows, s + 1, load, per_block, emit);
    if blocked[s] {
        return;
    }
    if u.small[s] > 0 {
        // small jobs count as zero load
        per_block[s] = Some(Pick::Small);
        block_picks(u, blocked, basis, tau, cap_value, pows, s + 1, load, per_block, emit);
        per_block[s] = None;
    }
    for off in 0..=tau as usize {
        if u.window[s][off] == 0 {
            continue;
        }
        let size = pows.pow(basis + off as i64);
        let new_load = load + &size;
        if new_load > *cap_value {
            continue;
        }
        per_block[s] = Some(Pick::Window(off));
        block_picks(u, blocked, basis, tau, cap_value, pows, s + 1, &new_load, per_block, emit);
        per_block[s] = None;
    }
}

/// Largest eps' of the form 1/2^t that keeps the end-to-end bound: the core
/// loses (1+eps')^2 and the bisection termination another (1 + eps'/3).
fn internal_eps(eps: &ExactTime) -> ExactTime {
    let target = BigRational::one() + eps.as_rational();
    for t in 1..=64u32 {
        let e = BigRational::new(BigInt::from(1), BigInt::from(2u64.pow(t.min(63))));
        let lhs = (BigRational::one() + &e)
            * (BigRational::one() + &e)
            * (BigRational::one() + &e / BigRational::from_integer(BigInt::from(3)));
        if lhs <= target {
            return ExactTime::from_rational(e);
        }
    }
    ExactTime::ratio(1, u64::MAX)
}

/// PTAS for uniform machines with at most k blocks: seed the search interval
/// [C/k, C] from the k-approximation, then run the bounded bisection with
/// the core as the feasibility test.
pub fn ptas_uniform(
    inst: &Instance,
    eps: &ExactTime,
    budget: &Budget,
) -> Result<(Schedule, ExactTime), SolveError> {
    if eps.is_zero() {
        return Err(SolveError::InvalidInput("eps must be positive".into()));
    }
    let (ka_sched, ka_c) = k_approx(inst, budget)?;
    let k = inst.graph.block_count() as u64;
    if k <= 1 || inst.n() == 0 {
        return Ok((ka_sched, ka_c)); // the 1-approximation is already optimal
    }
    let eps_p = internal_eps(eps);
    let mut best = ka_sched;
    let mut hi = ka_c.clone();
    let mut lo = ka_c.checked_div_int(k);
    if let Some(s) = ptas_core(inst, &hi, &eps_p, budget)? {
        best = s;
    }
    // bisect until hi <= (1 + eps'/3) * lo
    let third = ExactTime::from_rational(eps_p.as_rational() / BigRational::from_integer(BigInt::from(3)));
    loop {
        let threshold = lo.clone() + lo.clone() * third.clone();
        if hi <= threshold {
            break;
        }
        let mid = ExactTime::from_rational(
            (lo.as_rational() + hi.as_rational()) / BigRational::from_integer(BigInt::from(2)),
        );
        match ptas_core(inst, &mid, &eps_p, budget)? {
            Some(s) => {
                best = s;
                hi = mid;
            }
            None => lo = mid,
        }
    }
    let c = makespan(inst, &best);
    Ok((best, c))
}
