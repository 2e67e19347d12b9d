//! FPTAS for a fixed number of unrelated machines and a conflict graph of
//! bounded treewidth: processing times are rounded down to multiples of
//! eps*C/n, partial schedules are tabulated bag by bag over the extended
//! tree decomposition, and sets are trimmed to unique (loads, bag
//! assignment) pairs.
//!
//! Identical machines additionally canonicalize states under machine
//! permutation (machines sorted by load and bag content), which is what
//! makes the identical-machine specialization fast.

use std::collections::BTreeMap;

use crate::budget::{Budget, SolveError};
use crate::graph::TreeDecomposition;
use crate::model::{makespan, ExactTime, Instance, MachineEnv, Schedule};

/// A partial schedule: rounded per-machine loads for the whole subtree plus
/// the assignment of the current bag's jobs.
#[derive(Debug, Clone)]
pub struct PartialSchedule {
    /// Loads in grid units (multiples of eps*C/n).
    pub loads: Vec<u64>,
    /// Machine per bag job, bag jobs ascending.
    pub assign: Vec<u8>,
    perm: Option<Vec<u8>>,
    back: Back,
}

#[derive(Debug, Clone)]
enum Back {
    Leaf {
        assign: Vec<u8>,
    },
    Join {
        own: Vec<u8>,
        left: usize,
        right: usize,
        /// Machine relabelings applied to each child's decoded subtree.
        realign_left: Vec<u8>,
        realign_right: Vec<u8>,
    },
}

struct Ctx<'a> {
    inst: &'a Instance,
    decomp: &'a TreeDecomposition,
    /// Scaled integer times of job j on machine i, in grid units (rounded
    /// down to multiples of eps*C/n).
    unit_times: Vec<Vec<u64>>,
    cap_units: u64,
    m: usize,
    canonicalize: bool,
    /// Per node: positions (in the sorted bag) of the jobs that also occur
    /// in bags outside the node's subtree. Machines holding such jobs keep
    /// their identity during canonicalization; all other machines are
    /// interchangeable below this node.
    pinned_pos: Vec<Vec<usize>>,
}

/// For every node, which bag jobs occur outside its subtree: the bags
/// holding a job form a connected subtree, so a job is exposed everywhere
/// except at that subtree's highest node.
fn pinned_positions(decomp: &TreeDecomposition, n: usize) -> Vec<Vec<usize>> {
    let mut depth = vec![0usize; decomp.node_count()];
    let mut stack = vec![decomp.root];
    while let Some(x) = stack.pop() {
        for &c in &decomp.children[x] {
            depth[c] = depth[x] + 1;
            stack.push(c);
        }
    }
    let mut top = vec![usize::MAX; n];
    for (node, bag) in decomp.bags.iter().enumerate() {
        for &v in bag {
            let t = top[v as usize];
            if t == usize::MAX || depth[node] < depth[t] {
                top[v as usize] = node;
            }
        }
    }
    decomp
        .bags
        .iter()
        .enumerate()
        .map(|(node, bag)| {
            bag.iter()
                .enumerate()
                .filter(|&(_, &v)| top[v as usize] != node)
                .map(|(p, _)| p)
                .collect()
        })
        .collect()
}

/// Decide whether a schedule with rounded makespan at most `c` exists
/// (`c` in the scaled integer time domain, see [`Instance::time_scale`]);
/// on success the decoded schedule's true makespan is at most (1+eps)*c.
pub fn fptas_feasible(
    inst: &Instance,
    decomp: &TreeDecomposition,
    c: u64,
    eps: &ExactTime,
    budget: &Budget,
) -> Result<Option<Schedule>, SolveError> {
    assert!(!eps.is_zero(), "eps must be positive");
    if c == 0 {
        return Ok(None);
    }
    let n = inst.n();
    let m = inst.m();
    let scale = inst.time_scale();
    let times: Vec<Vec<u64>> = (0..m)
        .map(|i| (0..n).map(|j| inst.scaled_time(scale, i, j)).collect())
        .collect();
    // grid unit = eps*c/n; a time t spans floor(t*n / (eps*c)) units and a
    // machine holds at most floor(n/eps) units
    let (num, den) = {
        let r = eps.as_rational();
        let num: u64 = r
            .numer()
            .try_into()
            .map_err(|_| SolveError::InvalidInput("eps numerator too large".into()))?;
        let den: u64 = r
            .denom()
            .try_into()
            .map_err(|_| SolveError::InvalidInput("eps denominator too large".into()))?;
        (num, den)
    };
    let to_units = |t: u64| -> u64 {
        ((t as u128 * n as u128 * den as u128) / (num as u128 * c as u128)) as u64
    };
    let cap_units = (n as u128 * den as u128 / num as u128) as u64;
    let unit_times: Vec<Vec<u64>> = times
        .iter()
        .map(|row| row.iter().map(|&t| to_units(t)).collect())
        .collect();
    let ctx = Ctx {
        inst,
        decomp,
        unit_times,
        cap_units,
        m,
        canonicalize: matches!(inst.env, MachineEnv::Identical { .. }),
        pinned_pos: pinned_positions(decomp, n),
    };

    let order = decomp.postorder();
    let mut tables: Vec<Vec<PartialSchedule>> = vec![Vec::new(); decomp.node_count()];
    for &node in &order {
        budget.check_time()?;
        // child tables stay alive for the back-pointer decode
        let states = if decomp.children[node].is_empty() {
            leaf_states(&ctx, node)
        } else {
            let left = decomp.children[node][0];
            let right = decomp.children[node][1];
            join_states(&ctx, node, &tables[left], &tables[right], budget)?
        };
        budget.alloc_entries(states.len())?;
        if states.is_empty() {
            return Ok(None);
        }
        tables[node] = states;
    }

    let root = decomp.root;
    if tables[root].is_empty() {
        return Ok(None);
    }
    let mut assign = vec![u32::MAX; n];
    decode(&ctx, &tables, root, 0, &mut assign);
    debug_assert!(assign.iter().all(|&a| a != u32::MAX));
    Ok(Some(Schedule::new(assign)))
}

/// All conflict-respecting assignments of the bag's jobs with every load
/// within the cap, canonicalized and deduplicated.
fn leaf_states(ctx: &Ctx, node: usize) -> Vec<PartialSchedule> {
    let bag = &ctx.decomp.bags[node];
    let mut out: BTreeMap<(Vec<u64>, Vec<u8>), PartialSchedule> = BTreeMap::new();
    let mut assign = vec![0u8; bag.len()];
    let mut loads = vec![0u64; ctx.m];
    enumerate_bag(ctx, bag, 0, &mut assign, &mut loads, &mut |assign, loads| {
        let mut st = PartialSchedule {
            loads: loads.to_vec(),
            assign: assign.to_vec(),
            perm: None,
            back: Back::Leaf { assign: assign.to_vec() },
        };
        canonicalize(ctx, node, &mut st);
        out.entry(trim_key(ctx, node, &st)).or_insert(st);
    });
    out.into_values().collect()
}

/// Trim key: full loads plus the machines of the exposed (pinned) bag jobs.
/// States differing only in the placement of subtree-private jobs collapse.
fn trim_key(ctx: &Ctx, node: usize, st: &PartialSchedule) -> (Vec<u64>, Vec<u8>) {
    let pinned: Vec<u8> = ctx.pinned_pos[node]
        .iter()
        .map(|&p| st.assign[p])
        .collect();
    (st.loads.clone(), pinned)
}

fn enumerate_bag(
    ctx: &Ctx,
    bag: &[u32],
    pos: usize,
    assign: &mut Vec<u8>,
    loads: &mut Vec<u64>,
    emit: &mut impl FnMut(&[u8], &[u64]),
) {
    if pos == bag.len() {
        emit(assign, loads);
        return;
    }
    let job = bag[pos] as usize;
    'machines: for mi in 0..ctx.m {
        for p in 0..pos {
            if assign[p] as usize == mi && ctx.inst.graph.conflicts(bag[p], bag[pos]) {
                continue 'machines;
            }
        }
        let t = ctx.unit_times[mi][job];
        if loads[mi] + t > ctx.cap_units {
            continue;
        }
        assign[pos] = mi as u8;
        loads[mi] += t;
        enumerate_bag(ctx, bag, pos + 1, assign, loads, emit);
        loads[mi] -= t;
    }
}

/// A child state prepared for composition: contributions on its fixed
/// machines (shared-job loads already subtracted), its interchangeable
/// machines, and every distinct arrangement of their loads. The subtree
/// behind the state can be realized with any of those arrangements, so the
/// join must consider all of them.
struct CompositionPart {
    base: Vec<u64>,
    free: Vec<usize>,
    arrangements: Vec<Vec<u64>>,
    realign: Vec<Vec<u8>>,
}

fn composition_parts(
    ctx: &Ctx,
    child_node: usize,
    states: &[PartialSchedule],
    shared: &[(usize, usize)],
    bag_c: &[u32],
) -> Vec<CompositionPart> {
    states
        .iter()
        .map(|st| {
            let mut fixed = vec![false; ctx.m];
            for &p in &ctx.pinned_pos[child_node] {
                fixed[st.assign[p] as usize] = true;
            }
            if !ctx.canonicalize {
                fixed.fill(true);
            }
            let mut base = vec![0u64; ctx.m];
            let mut free = Vec::new();
            for mi in 0..ctx.m {
                if fixed[mi] {
                    base[mi] = st.loads[mi];
                } else {
                    free.push(mi);
                }
            }
            for &(_, cp) in shared {
                let mi = st.assign[cp] as usize;
                debug_assert!(fixed[mi], "shared jobs sit on fixed machines");
                base[mi] -= ctx.unit_times[mi][bag_c[cp] as usize];
            }
            let free_loads: Vec<u64> = free.iter().map(|&mi| st.loads[mi]).collect();
            let (arrangements, realign) = distinct_permutations(&free_loads, &free, ctx.m);
            CompositionPart { base, free, arrangements, realign }
        })
        .collect()
}

/// All distinct orderings of `loads`, together with the machine relabeling
/// (old -> new over the free machines) realizing each ordering; used when
/// decoding through this composition.
fn distinct_permutations(loads: &[u64], free: &[usize], m: usize) -> (Vec<Vec<u64>>, Vec<Vec<u8>>) {
    let mut arrangements = Vec::new();
    let mut realign = Vec::new();
    let k = loads.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut seen = std::collections::BTreeSet::new();
    permute(&mut idx, 0, &mut |perm| {
        let arranged: Vec<u64> = perm.iter().map(|&i| loads[i]).collect();
        if seen.insert(arranged.clone()) {
            // slot s now carries the load of original free machine perm[s]
            let mut map: Vec<u8> = (0..m as u8).collect();
            for (s, &orig) in perm.iter().enumerate() {
                map[free[orig]] = free[s] as u8;
            }
            arrangements.push(arranged);
            realign.push(map);
        }
    });
    (arrangements, realign)
}

fn permute(idx: &mut Vec<usize>, at: usize, emit: &mut impl FnMut(&[usize])) {
    if at == idx.len() {
        emit(idx);
        return;
    }
    for i in at..idx.len() {
        idx.swap(at, i);
        permute(idx, at + 1, emit);
        idx.swap(at, i);
    }
}

fn join_states(
    ctx: &Ctx,
    node: usize,
    left: &[PartialSchedule],
    right: &[PartialSchedule],
    budget: &Budget,
) -> Result<Vec<PartialSchedule>, SolveError> {
    let bag = &ctx.decomp.bags[node];
    let (lnode, rnode) = (ctx.decomp.children[node][0], ctx.decomp.children[node][1]);
    let shared_l = shared_positions(bag, &ctx.decomp.bags[lnode]);
    let shared_r = shared_positions(bag, &ctx.decomp.bags[rnode]);

    // group child states by the machines of the shared jobs
    let group = |states: &[PartialSchedule], shared: &[(usize, usize)]| {
        let mut g: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        for (i, st) in states.iter().enumerate() {
            let key: Vec<u8> = shared.iter().map(|&(_, cp)| st.assign[cp]).collect();
            g.entry(key).or_default().push(i);
        }
        g
    };
    let group_l = group(left, &shared_l);
    let group_r = group(right, &shared_r);
    let parts_l = composition_parts(ctx, lnode, left, &shared_l, &ctx.decomp.bags[lnode]);
    let parts_r = composition_parts(ctx, rnode, right, &shared_r, &ctx.decomp.bags[rnode]);

    let mut out: BTreeMap<(Vec<u64>, Vec<u8>), PartialSchedule> = BTreeMap::new();
    let mut own_assign = vec![0u8; bag.len()];
    let mut own_loads = vec![0u64; ctx.m];
    let mut result: Result<(), SolveError> = Ok(());
    enumerate_bag(ctx, bag, 0, &mut own_assign, &mut own_loads, &mut |own, own_loads| {
        if result.is_err() {
            return;
        }
        if let Err(e) = budget.check_time() {
            result = Err(e);
            return;
        }
        let key_l: Vec<u8> = shared_l.iter().map(|&(bp, _)| own[bp]).collect();
        let key_r: Vec<u8> = shared_r.iter().map(|&(bp, _)| own[bp]).collect();
        let (Some(ls), Some(rs)) = (group_l.get(&key_l), group_r.get(&key_r)) else {
            return;
        };
        for &li in ls {
            let pl = &parts_l[li];
            for &ri in rs {
                let pr = &parts_r[ri];
                let mut fixed = vec![0u64; ctx.m];
                let mut over = false;
                for mi in 0..ctx.m {
                    fixed[mi] = own_loads[mi] + pl.base[mi] + pr.base[mi];
                    if fixed[mi] > ctx.cap_units {
                        over = true;
                        break;
                    }
                }
                if over {
                    continue;
                }
                for (ai, al) in pl.arrangements.iter().enumerate() {
                    'right: for (bi, bl) in pr.arrangements.iter().enumerate() {
                        let mut loads = fixed.clone();
                        for (s, &mi) in pl.free.iter().enumerate() {
                            loads[mi] += al[s];
                        }
                        for (s, &mi) in pr.free.iter().enumerate() {
                            loads[mi] += bl[s];
                            if loads[mi] > ctx.cap_units {
                                continue 'right;
                            }
                        }
                        if loads.iter().any(|&l| l > ctx.cap_units) {
                            continue;
                        }
                        let mut st = PartialSchedule {
                            loads,
                            assign: own.to_vec(),
                            perm: None,
                            back: Back::Join {
                                own: own.to_vec(),
                                left: li,
                                right: ri,
                                realign_left: pl.realign[ai].clone(),
                                realign_right: pr.realign[bi].clone(),
                            },
                        };
                        canonicalize(ctx, node, &mut st);
                        out.entry(trim_key(ctx, node, &st)).or_insert(st);
                    }
                }
            }
        }
    });
    result?;
    Ok(out.into_values().collect())
}

/// Positions of the shared jobs: (index in parent bag, index in child bag).
fn shared_positions(parent: &[u32], child: &[u32]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (bp, &v) in parent.iter().enumerate() {
        if let Ok(cp) = child.binary_search(&v) {
            out.push((bp, cp));
        }
    }
    out
}

/// For identical machines, machines holding an exposed bag job keep their
/// identity; all remaining machines are interchangeable below this subtree
/// and are sorted by load.
fn canonicalize(ctx: &Ctx, node: usize, st: &mut PartialSchedule) {
    if !ctx.canonicalize {
        return;
    }
    let m = ctx.m;
    let mut fixed = vec![false; m];
    for &p in &ctx.pinned_pos[node] {
        fixed[st.assign[p] as usize] = true;
    }
    let mut free: Vec<usize> = (0..m).filter(|&mi| !fixed[mi]).collect();
    if free.len() <= 1 {
        return;
    }
    let mut by_load = free.clone();
    by_load.sort_by_key(|&mi| st.loads[mi]);
    free.sort_unstable();
    let mut perm: Vec<u8> = (0..m as u8).collect(); // old -> new
    let mut loads = st.loads.clone();
    for (&slot, &old) in free.iter().zip(by_load.iter()) {
        perm[old] = slot as u8;
        loads[slot] = st.loads[old];
    }
    if perm.iter().enumerate().all(|(i, &p)| p as usize == i) {
        return;
    }
    st.loads = loads;
    for a in st.assign.iter_mut() {
        *a = perm[*a as usize];
    }
    st.perm = Some(perm);
}

fn decode(ctx: &Ctx, tables: &[Vec<PartialSchedule>], node: usize, idx: usize, out: &mut Vec<u32>) {
    let st = &tables[node][idx];
    let mut local = vec![u32::MAX; out.len()];
    match &st.back {
        Back::Leaf { assign } => {
            for (p, &v) in ctx.decomp.bags[node].iter().enumerate() {
                local[v as usize] = assign[p] as u32;
            }
        }
        Back::Join { own, left, right, realign_left, realign_right } => {
            for (p, &v) in ctx.decomp.bags[node].iter().enumerate() {
                local[v as usize] = own[p] as u32;
            }
            for (side, (&child, (idx, realign))) in ctx.decomp.children[node]
                .iter()
                .zip([(left, realign_left), (right, realign_right)])
                .enumerate()
            {
                let _ = side;
                let mut sub = vec![u32::MAX; out.len()];
                decode(ctx, tables, child, *idx, &mut sub);
                for (v, &mi) in sub.iter().enumerate() {
                    if mi == u32::MAX {
                        continue;
                    }
                    let mapped = realign[mi as usize] as u32;
                    debug_assert!(local[v] == u32::MAX || local[v] == mapped);
                    local[v] = mapped;
                }
            }
        }
    }
    if let Some(perm) = &st.perm {
        for mi in local.iter_mut() {
            if *mi != u32::MAX {
                *mi = perm[*mi as usize] as u32;
            }
        }
    }
    for (v, &mi) in local.iter().enumerate() {
        if mi != u32::MAX {
            out[v] = mi;
        }
    }
}

/// Binary search over the scaled makespan guesses; the returned schedule has
/// makespan at most (1+eps) times the optimum.
pub fn fptas(
    inst: &Instance,
    eps: &ExactTime,
    budget: &Budget,
) -> Result<(Schedule, ExactTime), SolveError> {
    assert!(!eps.is_zero(), "eps must be positive");
    if inst.graph.max_block_size() > inst.m() {
        return Err(SolveError::Infeasible(format!(
            "largest block has {} jobs but only {} machines",
            inst.graph.max_block_size(),
            inst.m()
        )));
    }
    if inst.n() == 0 {
        return Ok((Schedule::new(Vec::new()), ExactTime::zero()));
    }
    let decomp = inst.graph.tree_decomposition();
    let n = inst.n();
    let m = inst.m();
    let scale = inst.time_scale();
    let mut lo = 0u64;
    let mut t_max = 0u64;
    for j in 0..n {
        let fastest = (0..m).map(|i| inst.scaled_time(scale, i, j)).min().unwrap();
        lo = lo.max(fastest);
        t_max = t_max.max((0..m).map(|i| inst.scaled_time(scale, i, j)).max().unwrap());
    }
    let mut hi = n as u64 * t_max;
    let mut best = fptas_feasible(inst, &decomp, hi, eps, budget)?
        .ok_or_else(|| SolveError::Infeasible("no schedule at the trivial upper bound".into()))?;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match fptas_feasible(inst, &decomp, mid, eps, budget)? {
            Some(s) => {
                best = s;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let c = makespan(inst, &best);
    Ok((best, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_block_graph, BlockCutTree, RngSeed};
    use crate::model::is_feasible;
    use crate::oracle::brute_force;

    fn eps(num: u64, den: u64) -> ExactTime {
        ExactTime::ratio(num, den)
    }

    #[test]
    fn single_job_single_machine() {
        let g = BlockCutTree::from_blocks(1, &[vec![0]]).unwrap();
        let inst = Instance::new(
            g,
            MachineEnv::Unrelated { m: 1, times: vec![vec![5]] },
            None,
        )
        .unwrap();
        let decomp = inst.graph.tree_decomposition();
        let r = fptas_feasible(&inst, &decomp, 5, &eps(1, 2), &Budget::unlimited()).unwrap();
        assert!(r.is_some());
        let r = fptas_feasible(&inst, &decomp, 2, &eps(1, 2), &Budget::unlimited()).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn rounding_floors_to_grid() {
        // p = 7 with grid eps*C/n = 2 stores as 6: with n = 1, eps = 1,
        // C = 2 the unit is 2, so 7 spans floor(7/2) = 3 units.
        let g = BlockCutTree::from_blocks(1, &[vec![0]]).unwrap();
        let inst = Instance::new(
            g,
            MachineEnv::Unrelated { m: 1, times: vec![vec![7]] },
            None,
        )
        .unwrap();
        let decomp = inst.graph.tree_decomposition();
        // cap = floor(n/eps) = 1 unit at eps=1: 3 units > 1 -> NO
        assert!(
            fptas_feasible(&inst, &decomp, 2, &eps(1, 1), &Budget::unlimited())
                .unwrap()
                .is_none()
        );
        // at C = 7: unit = 7, 7 -> 1 unit, cap 1 -> YES
        assert!(
            fptas_feasible(&inst, &decomp, 7, &eps(1, 1), &Budget::unlimited())
                .unwrap()
                .is_some()
        );
    }

    #[test]
    fn edgeless_single_machine_sums() {
        let g = BlockCutTree::from_blocks(3, &[vec![0], vec![1], vec![2]]).unwrap();
        let inst = Instance::new(
            g,
            MachineEnv::Unrelated { m: 1, times: vec![vec![2, 3, 4]] },
            None,
        )
        .unwrap();
        let (sched, c) = fptas(&inst, &eps(1, 4), &Budget::unlimited()).unwrap();
        assert!(is_feasible(&inst, &sched));
        assert_eq!(c, ExactTime::from_int(9));
    }

    #[test]
    fn exactness_with_fine_grid() {
        // eps = 1/(n+1) on identical machines: the rounding grid is finer
        // than the integrality gap, so the result is exactly optimal
        for seed in 0..8u64 {
            let t = generate_block_graph(&[3, 2, 2], RngSeed(seed)).unwrap();
            let n = t.n();
            let proc: Vec<u64> = (0..n as u64).map(|j| 1 + (j * 3 + seed) % 5).collect();
            let inst =
                Instance::new(t, MachineEnv::Identical { m: 3 }, Some(proc)).unwrap();
            let (sched, c) = fptas(&inst, &eps(1, n as u64 + 1), &Budget::unlimited()).unwrap();
            assert!(is_feasible(&inst, &sched));
            let (_, opt) = brute_force(&inst).unwrap();
            assert_eq!(c, opt, "seed {}", seed);
        }
    }

    #[test]
    fn ratio_bound_sweep_all_envs() {
        for seed in 0..5u64 {
            let t = generate_block_graph(&[3, 2], RngSeed(seed)).unwrap();
            let n = t.n();
            for e in [eps(1, 4), eps(1, 1)] {
                // identical
                let proc: Vec<u64> = (0..n as u64).map(|j| 1 + (j + seed) % 5).collect();
                let inst = Instance::new(
                    t.clone(),
                    MachineEnv::Identical { m: 3 },
                    Some(proc.clone()),
                )
                .unwrap();
                let (s, c) = fptas(&inst, &e, &Budget::unlimited()).unwrap();
                assert!(is_feasible(&inst, &s));
                let (_, opt) = brute_force(&inst).unwrap();
                let bound = opt.clone() + opt.clone() * ExactTime::from_rational(e.as_rational().clone());
                assert!(c <= bound, "identical ratio: {} > (1+{})*{}", c, e, opt);
                // uniform (scaled internally by the lcm of speeds)
                let inst = Instance::new(
                    t.clone(),
                    MachineEnv::Uniform { m: 3, speeds: vec![5, 2, 1] },
                    Some(proc),
                )
                .unwrap();
                let (s, c) = fptas(&inst, &e, &Budget::unlimited()).unwrap();
                assert!(is_feasible(&inst, &s));
                let (_, opt) = brute_force(&inst).unwrap();
                let bound = opt.clone() + opt.clone() * ExactTime::from_rational(e.as_rational().clone());
                assert!(c <= bound, "uniform ratio: {} > bound", c);
                // unrelated
                let times: Vec<Vec<u64>> = (0..3u64)
                    .map(|i| (0..n as u64).map(|j| 1 + (i * 5 + j * 2 + seed) % 7).collect())
                    .collect();
                let inst =
                    Instance::new(t.clone(), MachineEnv::Unrelated { m: 3, times }, None)
                        .unwrap();
                let (s, c) = fptas(&inst, &e, &Budget::unlimited()).unwrap();
                assert!(is_feasible(&inst, &s));
                let (_, opt) = brute_force(&inst).unwrap();
                let bound = opt.clone() + opt.clone() * ExactTime::from_rational(e.as_rational().clone());
                assert!(c <= bound, "unrelated ratio: {} > bound", c);
            }
        }
    }

    /// The feasibility answer is the same with and without trimming on
    /// small instances (trimming only removes load-equivalent duplicates);
    /// here we compare against the oracle decision instead of an untrimmed
    /// variant: feasible at C iff the oracle optimum fits in (1+eps)*C.
    #[test]
    fn trim_preserves_decisions() {
        for seed in 0..6u64 {
            let t = generate_block_graph(&[2, 2, 2], RngSeed(seed)).unwrap();
            let n = t.n();
            let proc: Vec<u64> = (0..n as u64).map(|j| 1 + (j * 2 + seed) % 4).collect();
            let inst = Instance::new(t, MachineEnv::Identical { m: 3 }, Some(proc)).unwrap();
            let decomp = inst.graph.tree_decomposition();
            let (_, opt) = brute_force(&inst).unwrap();
            let e = eps(1, n as u64 + 1);
            for c in 1..=10u64 {
                let got = fptas_feasible(&inst, &decomp, c, &e, &Budget::unlimited())
                    .unwrap()
                    .is_some();
                // with the fine grid, rounding is exact: feasible iff opt <= c
                let want = opt <= ExactTime::from_int(c);
                assert_eq!(got, want, "seed {} C {}", seed, c);
            }
        }
    }

    #[test]
    fn monotone_in_c() {
        for seed in 0..5u64 {
            let t = generate_block_graph(&[2, 2], RngSeed(seed)).unwrap();
            let proc: Vec<u64> = (0..t.n() as u64).map(|j| 2 + (j + seed) % 5).collect();
            let inst = Instance::new(t, MachineEnv::Identical { m: 2 }, Some(proc)).unwrap();
            let decomp = inst.graph.tree_decomposition();
            let mut seen_yes = false;
            for c in 1..=30u64 {
                let got = fptas_feasible(&inst, &decomp, c, &eps(1, 2), &Budget::unlimited())
                    .unwrap()
                    .is_some();
                assert!(!seen_yes || got, "acceptance not monotone at C={}", c);
                seen_yes |= got;
            }
            assert!(seen_yes);
        }
    }

    #[test]
    fn join_consistency_decodes_every_job_once() {
        // deep graph so joins stack up
        let t = generate_block_graph(&[2, 2, 2, 2, 2, 2], RngSeed(9)).unwrap();
        let n = t.n();
        let inst =
            Instance::new(t, MachineEnv::Identical { m: 3 }, Some(vec![1; n])).unwrap();
        let (sched, _) = fptas(&inst, &eps(1, 2), &Budget::unlimited()).unwrap();
        assert_eq!(sched.assign.len(), n);
        assert!(is_feasible(&inst, &sched));
    }
}
