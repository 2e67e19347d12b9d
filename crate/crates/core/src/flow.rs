//! Exact solver for uniform machines, unit jobs, and a bounded number of
//! cut-vertices: binary search over the O(mn) candidate makespans, an
//! exhaustive scan of cut-vertex assignments, and a max-flow feasibility
//! test per assignment, with an embedded Dinic-style solver.

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::budget::{Budget, SolveError};
use crate::model::{ExactTime, Instance, MachineEnv, Schedule};

/// Assignment of the cut-vertices to machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutAssignment {
    /// Cut-vertex ids ascending.
    pub cuts: Vec<u32>,
    /// Machine per cut-vertex, parallel to `cuts`.
    pub machines: Vec<u32>,
}

impl CutAssignment {
    pub fn machine_of(&self, v: u32) -> Option<u32> {
        self.cuts
            .binary_search(&v)
            .ok()
            .map(|i| self.machines[i])
    }
}

/// Five-layer unit-capacity network: source, simplicial jobs, (block,
/// machine) pairs, machines, sink. Machine-to-sink capacities are
/// floor(C * s_j) minus the cut-vertices already pinned to the machine.
#[derive(Debug)]
pub struct FlowNetwork {
    pub node_count: usize,
    pub source: usize,
    pub sink: usize,
    /// (from, to, capacity); job and pair nodes are documented by the
    /// offsets below.
    pub edges: Vec<(usize, usize, i64)>,
    pub job_offset: usize,
    pub jobs: Vec<u32>,
    pub pair_offset: usize,
    pub machine_offset: usize,
    pub m: usize,
    pub block_count: usize,
}

impl FlowNetwork {
    pub fn job_node(&self, idx: usize) -> usize {
        self.job_offset + idx
    }

    pub fn pair_node(&self, block: usize, machine: usize) -> usize {
        self.pair_offset + block * self.m + machine
    }

    pub fn machine_node(&self, machine: usize) -> usize {
        self.machine_offset + machine
    }
}

/// Deduplicated, ascending list of the candidate makespans j / s_i for
/// j = 1..n and i = 1..m.
pub fn candidate_makespans(inst: &Instance) -> Result<Vec<ExactTime>, SolveError> {
    let MachineEnv::Uniform { speeds, .. } = &inst.env else {
        return Err(SolveError::WrongEnvironment(
            "uniform machines required".into(),
        ));
    };
    if !inst.is_unit() {
        return Err(SolveError::WrongEnvironment("unit jobs required".into()));
    }
    let n = inst.n() as u64;
    let mut cands: Vec<ExactTime> = Vec::new();
    for &s in speeds {
        for j in 1..=n {
            cands.push(ExactTime::ratio(j, s));
        }
    }
    cands.sort();
    cands.dedup();
    Ok(cands)
}

/// Build F(G, C, f). Fails with `InvalidInput` when some machine cannot even
/// hold its pinned cut-vertices within C.
pub fn build_flow_network(
    inst: &Instance,
    c: &ExactTime,
    f: &CutAssignment,
) -> Result<FlowNetwork, SolveError> {
    let MachineEnv::Uniform { speeds, .. } = &inst.env else {
        return Err(SolveError::WrongEnvironment(
            "uniform machines required".into(),
        ));
    };
    let m = inst.m();
    let tree = &inst.graph;
    let simplicial: Vec<u32> = (0..tree.n() as u32).filter(|&v| !tree.is_cut(v)).collect();
    let block_count = tree.block_count();

    let mut pinned = vec![0i64; m];
    for (&v, &mi) in f.cuts.iter().zip(f.machines.iter()) {
        debug_assert!(tree.is_cut(v));
        pinned[mi as usize] += 1;
    }

    let job_offset = 1;
    let pair_offset = job_offset + simplicial.len();
    let machine_offset = pair_offset + block_count * m;
    let sink = machine_offset + m;
    let mut net = FlowNetwork {
        node_count: sink + 1,
        source: 0,
        sink,
        edges: Vec::new(),
        job_offset,
        jobs: simplicial.clone(),
        pair_offset,
        machine_offset,
        m,
        block_count,
    };

    for idx in 0..simplicial.len() {
        net.edges.push((0, net.job_node(idx), 1));
    }
    for (idx, &job) in simplicial.iter().enumerate() {
        // a simplicial vertex lives in exactly one block
        let b = tree.vertex_blocks(job)[0] as usize;
        for mi in 0..m {
            let blocked = tree.blocks()[b]
                .iter()
                .any(|&u| u != job && f.machine_of(u) == Some(mi as u32));
            if !blocked {
                net.edges.push((net.job_node(idx), net.pair_node(b, mi), 1));
            }
        }
    }
    for b in 0..block_count {
        for mi in 0..m {
            net.edges
                .push((net.pair_node(b, mi), net.machine_node(mi), 1));
        }
    }
    for mi in 0..m {
        let cap = c
            .mul_int(speeds[mi])
            .as_rational()
            .floor()
            .to_integer()
            .to_i64()
            .ok_or_else(|| SolveError::InvalidInput("capacity overflow".into()))?;
        let w = cap - pinned[mi];
        if w < 0 {
            return Err(SolveError::InvalidInput(format!(
                "machine {} cannot hold its pinned cut-vertices within C",
                mi
            )));
        }
        net.edges.push((net.machine_node(mi), net.sink, w));
    }
    Ok(net)
}

/// Maximum s-t flow with integer capacities: shortest augmenting paths in
/// phases with blocking flow (Dinic). Returns the value and per-edge flows
/// in the order the edges were added.
pub fn max_flow(net: &FlowNetwork) -> (i64, Vec<i64>) {
    let mut solver = Dinic::new(net.node_count);
    let mut ids = Vec::with_capacity(net.edges.len());
    for &(a, b, cap) in &net.edges {
        ids.push(solver.add_edge(a, b, cap));
    }
    let value = solver.run(net.source, net.sink);
    let flows = ids.iter().map(|&id| solver.flow_on(id)).collect();
    (value, flows)
}

struct DinicEdge {
    to: usize,
    cap: i64,
    rev: usize,
}

pub(crate) struct Dinic {
    graph: Vec<Vec<DinicEdge>>,
    level: Vec<i32>,
    iter: Vec<usize>,
    initial_caps: Vec<i64>,
    edge_locs: Vec<(usize, usize)>,
}

impl Dinic {
    pub(crate) fn new(n: usize) -> Self {
        Dinic {
            graph: (0..n).map(|_| Vec::new()).collect(),
            level: vec![0; n],
            iter: vec![0; n],
            initial_caps: Vec::new(),
            edge_locs: Vec::new(),
        }
    }

    pub(crate) fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let rev_from = self.graph[to].len();
        let rev_to = self.graph[from].len();
        self.graph[from].push(DinicEdge { to, cap, rev: rev_from });
        self.graph[to].push(DinicEdge { to: from, cap: 0, rev: rev_to });
        self.initial_caps.push(cap);
        self.edge_locs.push((from, rev_to));
        self.edge_locs.len() - 1
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        let mut queue = std::collections::VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for e in &self.graph[v] {
                if e.cap > 0 && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, f: i64) -> i64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.graph[v].len() {
            let (to, cap, rev) = {
                let e = &self.graph[v][self.iter[v]];
                (e.to, e.cap, e.rev)
            };
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, f.min(cap));
                if d > 0 {
                    self.graph[v][self.iter[v]].cap -= d;
                    self.graph[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub(crate) fn run(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    pub(crate) fn flow_on(&self, id: usize) -> i64 {
        let (from, idx) = self.edge_locs[id];
        self.initial_caps[id] - self.graph[from][idx].cap
    }
}

/// Test a single (C, f): the flow value must saturate every simplicial job.
/// Returns the decoded schedule on success.
fn try_assignment(inst: &Instance, c: &ExactTime, f: &CutAssignment) -> Option<Schedule> {
    let net = build_flow_network(inst, c, f).ok()?;
    let want = net.jobs.len() as i64;
    let (value, flows) = max_flow(&net);
    if value != want {
        return None;
    }
    let mut assign = vec![u32::MAX; inst.n()];
    for (&v, &mi) in f.cuts.iter().zip(f.machines.iter()) {
        assign[v as usize] = mi;
    }
    for (eidx, &(a, b, _)) in net.edges.iter().enumerate() {
        if flows[eidx] > 0 && a >= net.job_offset && a < net.pair_offset && b >= net.pair_offset && b < net.machine_offset
        {
            let job = net.jobs[a - net.job_offset];
            let mi = ((b - net.pair_offset) % net.m) as u32;
            assign[job as usize] = mi;
        }
    }
    debug_assert!(assign.iter().all(|&x| x != u32::MAX));
    Some(Schedule::new(assign))
}

/// Enumerate valid cut assignments in mixed-radix order (cut-vertices in
/// pre-order), pruning adjacency and capacity violations as they appear.
/// Calls `test` per valid assignment; the first acceptance wins. With
/// `parallel`, assignments are tested in chunks and the lowest-index
/// acceptance is kept, so the result matches the sequential order.
fn search_assignments(
    inst: &Instance,
    c: &ExactTime,
    budget: &Budget,
    parallel: bool,
) -> Result<Option<Schedule>, SolveError> {
    let tree = &inst.graph;
    let MachineEnv::Uniform { speeds, .. } = &inst.env else {
        unreachable!()
    };
    let m = inst.m();
    // cut-vertices in pre-order over the blocks
    let mut cuts: Vec<u32> = Vec::new();
    {
        let mut seen = vec![false; tree.n()];
        for b in tree.preorder_blocks() {
            for &v in &tree.blocks()[b as usize] {
                if tree.is_cut(v) && !seen[v as usize] {
                    seen[v as usize] = true;
                    cuts.push(v);
                }
            }
        }
    }
    let caps: Vec<i64> = (0..m)
        .map(|mi| {
            c.mul_int(speeds[mi])
                .as_rational()
                .floor()
                .to_integer()
                .to_i64()
                .unwrap_or(i64::MAX)
        })
        .collect();

    // adjacency among cut-vertices
    let adj: Vec<Vec<usize>> = cuts
        .iter()
        .map(|&v| {
            cuts.iter()
                .enumerate()
                .filter(|&(_, &u)| u != v && tree.conflicts(v, u))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let mut valid: Vec<Vec<u32>> = Vec::new();
    let mut partial = vec![0u32; cuts.len()];
    enumerate_valid(
        inst,
        &cuts,
        &adj,
        &caps,
        m,
        0,
        &mut partial,
        &mut vec![0i64; m],
        &mut valid,
        budget,
    )?;

    let mut sorted_cuts = cuts.clone();
    sorted_cuts.sort_unstable();
    let reorder: Vec<usize> = sorted_cuts
        .iter()
        .map(|&v| cuts.iter().position(|&u| u == v).unwrap())
        .collect();
    let to_assignment = |machines: &Vec<u32>| CutAssignment {
        cuts: sorted_cuts.clone(),
        machines: reorder.iter().map(|&i| machines[i]).collect(),
    };

    if parallel {
        let found = valid
            .par_iter()
            .enumerate()
            .filter_map(|(idx, machines)| {
                try_assignment(inst, c, &to_assignment(machines)).map(|s| (idx, s))
            })
            .min_by_key(|&(idx, _)| idx);
        return Ok(found.map(|(_, s)| s));
    }
    for machines in &valid {
        budget.check_time()?;
        if let Some(s) = try_assignment(inst, c, &to_assignment(machines)) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_valid(
    inst: &Instance,
    cuts: &[u32],
    adj: &[Vec<usize>],
    caps: &[i64],
    m: usize,
    pos: usize,
    partial: &mut Vec<u32>,
    counts: &mut Vec<i64>,
    out: &mut Vec<Vec<u32>>,
    budget: &Budget,
) -> Result<(), SolveError> {
    if pos == cuts.len() {
        out.push(partial.clone());
        return Ok(());
    }
    budget.check_time()?;
    for mi in 0..m as u32 {
        if adj[pos]
            .iter()
            .any(|&e| e < pos && partial[e] == mi)
        {
            continue; // adjacent cut-vertices must differ
        }
        if counts[mi as usize] + 1 > caps[mi as usize] {
            continue; // guessed capacity exceeded
        }
        partial[pos] = mi;
        counts[mi as usize] += 1;
        enumerate_valid(inst, cuts, adj, caps, m, pos + 1, partial, counts, out, budget)?;
        counts[mi as usize] -= 1;
    }
    Ok(())
}

/// Exact optimum for uniform machines and unit jobs by bisecting the sorted
/// candidate list; per candidate all valid cut assignments are tried.
pub fn solve_uniform_unit(
    inst: &Instance,
    budget: &Budget,
    parallel: bool,
) -> Result<(Schedule, ExactTime), SolveError> {
    if !matches!(inst.env, MachineEnv::Uniform { .. }) {
        return Err(SolveError::WrongEnvironment(
            "uniform machines required".into(),
        ));
    }
    if !inst.is_unit() {
        return Err(SolveError::WrongEnvironment("unit jobs required".into()));
    }
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
    let cands = candidate_makespans(inst)?;
    let mut lo = 0usize;
    let mut hi = cands.len() - 1;
    let mut best = search_assignments(inst, &cands[hi], budget, parallel)?
        .ok_or_else(|| SolveError::Infeasible("no schedule at the largest candidate".into()))?;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match search_assignments(inst, &cands[mid], budget, parallel)? {
            Some(s) => {
                best = s;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    Ok((best, cands[hi].clone()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::{generate_block_graph, BlockCutTree, RngSeed};
    use crate::model::{is_feasible, makespan};
    use crate::oracle::brute_force;

    pub(crate) fn uniform_unit(tree: BlockCutTree, speeds: Vec<u64>) -> Instance {
        let n = tree.n();
        Instance::new(
            tree,
            MachineEnv::Uniform { m: speeds.len(), speeds },
            Some(vec![1; n]),
        )
        .unwrap()
    }

    /// Does a schedule extending f with makespan <= C exist? Exhaustive over
    /// the simplicial jobs only (the independent reference for the flow).
    pub(crate) fn extension_exists(inst: &Instance, c: &ExactTime, f: &CutAssignment) -> bool {
        let MachineEnv::Uniform { speeds, .. } = &inst.env else {
            panic!("uniform required")
        };
        let tree = &inst.graph;
        let m = inst.m();
        let caps: Vec<i64> = (0..m)
            .map(|mi| {
                c.mul_int(speeds[mi])
                    .as_rational()
                    .floor()
                    .to_integer()
                    .to_i64()
                    .unwrap()
            })
            .collect();
        let mut counts = vec![0i64; m];
        for &mi in &f.machines {
            counts[mi as usize] += 1;
        }
        if (0..m).any(|mi| counts[mi] > caps[mi]) {
            return false;
        }
        let simplicial: Vec<u32> =
            (0..tree.n() as u32).filter(|&v| !tree.is_cut(v)).collect();
        fn rec(
            tree: &BlockCutTree,
            simplicial: &[u32],
            pos: usize,
            assign: &mut std::collections::BTreeMap<u32, u32>,
            counts: &mut Vec<i64>,
            caps: &[i64],
            m: usize,
        ) -> bool {
            if pos == simplicial.len() {
                return true;
            }
            let v = simplicial[pos];
            'next: for mi in 0..m as u32 {
                if counts[mi as usize] + 1 > caps[mi as usize] {
                    continue;
                }
                let b = tree.vertex_blocks(v)[0];
                for &u in &tree.blocks()[b as usize] {
                    if u != v && assign.get(&u) == Some(&mi) {
                        continue 'next;
                    }
                }
                assign.insert(v, mi);
                counts[mi as usize] += 1;
                if rec(tree, simplicial, pos + 1, assign, counts, caps, m) {
                    return true;
                }
                assign.remove(&v);
                counts[mi as usize] -= 1;
            }
            false
        }
        let mut assign: std::collections::BTreeMap<u32, u32> = f
            .cuts
            .iter()
            .zip(f.machines.iter())
            .map(|(&v, &mi)| (v, mi))
            .collect();
        rec(tree, &simplicial, 0, &mut assign, &mut counts, &caps, m)
    }

    #[test]
    fn candidates_small() {
        let g = BlockCutTree::from_blocks(2, &[vec![0], vec![1]]).unwrap();
        let inst = uniform_unit(g, vec![2, 1]);
        let cands = candidate_makespans(&inst).unwrap();
        assert_eq!(
            cands,
            vec![ExactTime::ratio(1, 2), ExactTime::from_int(1), ExactTime::from_int(2)]
        );

        let g = BlockCutTree::from_blocks(3, &[vec![0], vec![1], vec![2]]).unwrap();
        let inst = uniform_unit(g, vec![1, 1]);
        let cands = candidate_makespans(&inst).unwrap();
        assert_eq!(
            cands,
            vec![ExactTime::from_int(1), ExactTime::from_int(2), ExactTime::from_int(3)]
        );
    }

    #[test]
    fn candidates_contain_optimum() {
        for seed in 0..10u64 {
            let t = generate_block_graph(&[3, 2], RngSeed(seed)).unwrap();
            let inst = uniform_unit(t, vec![5, 2, 1]);
            let cands = candidate_makespans(&inst).unwrap();
            let (_, opt) = brute_force(&inst).unwrap();
            assert!(cands.contains(&opt), "optimum {} not a candidate", opt);
        }
    }

    /// The two-block figure: triangle {J1, J2, J4} and edge {J3, J4} with
    /// f(J4) = M2 on three machines.
    #[test]
    fn figure_network_edges() {
        // J1..J4 -> 0..3: blocks {0,1,3} and {2,3}; J4 = 3 is the cut-vertex
        let g = BlockCutTree::from_blocks(4, &[vec![0, 1, 3], vec![2, 3]]).unwrap();
        let inst = uniform_unit(g, vec![1, 1, 1]);
        let f = CutAssignment { cuts: vec![3], machines: vec![1] };
        let c = ExactTime::from_int(2);
        let net = build_flow_network(&inst, &c, &f).unwrap();

        // source edges to J1, J2, J3
        let source_edges: Vec<usize> = net
            .edges
            .iter()
            .filter(|&&(a, _, _)| a == net.source)
            .map(|&(_, b, _)| b)
            .collect();
        assert_eq!(source_edges.len(), 3);

        // job -> (block, machine) edges skip machine M2 (index 1)
        let job_pair: Vec<(usize, usize)> = net
            .edges
            .iter()
            .filter(|&&(a, b, _)| a >= net.job_offset && a < net.pair_offset && b >= net.pair_offset && b < net.machine_offset)
            .map(|&(a, b, _)| (a - net.job_offset, b - net.pair_offset))
            .collect();
        // jobs list is [0, 1, 2] (simplicial); block of 0,1 is index 0, block of 2 is index 1
        let expect: Vec<(usize, usize)> = vec![
            (0, 0),     // J1 -> (B1, M1)
            (0, 2),     // J1 -> (B1, M3)
            (1, 0),     // J2 -> (B1, M1)
            (1, 2),     // J2 -> (B1, M3)
            (2, net.m + 0), // J3 -> (B2, M1)
            (2, net.m + 2), // J3 -> (B2, M3)
        ];
        assert_eq!(job_pair, expect);

        // all six (block, machine) -> machine edges exist
        let pair_machine = net
            .edges
            .iter()
            .filter(|&&(a, b, _)| a >= net.pair_offset && a < net.machine_offset && b >= net.machine_offset && b < net.sink)
            .count();
        assert_eq!(pair_machine, 6);

        // w_2 = floor(C * s_2) - 1
        let w: Vec<i64> = net
            .edges
            .iter()
            .filter(|&&(_, b, _)| b == net.sink)
            .map(|&(_, _, cap)| cap)
            .collect();
        assert_eq!(w, vec![2, 1, 2]);
    }

    #[test]
    fn no_simplicial_vertices_trivial_flow() {
        // single edge where both endpoints are... both simplicial; instead
        // use a path of three vertices where only the middle is a cut: the
        // leaves are simplicial, so build the opposite: a star where every
        // leaf was contracted away is impossible; use two blocks sharing a
        // vertex with all other vertices being cut is impossible too, so
        // check the empty-layer claim directly on a 1-vertex graph.
        let g = BlockCutTree::from_blocks(1, &[vec![0]]).unwrap();
        let inst = uniform_unit(g, vec![1]);
        // the only vertex is simplicial, so instead pin it artificially:
        // a graph with zero simplicial vertices needs none; max flow over
        // an empty job layer is 0 = n - cut(G) when every job is a cut.
        // Simplest concrete case: P3 (two blocks {0,1},{1,2}); 1 is cut.
        let g = BlockCutTree::from_blocks(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        let inst2 = uniform_unit(g, vec![1, 1]);
        let f = CutAssignment { cuts: vec![1], machines: vec![0] };
        let net = build_flow_network(&inst2, &ExactTime::from_int(2), &f).unwrap();
        let (value, _) = max_flow(&net);
        assert_eq!(value, 2); // both leaves route somewhere
        let _ = inst;
    }

    #[test]
    fn dinic_basics() {
        // single path with unit capacities
        let mut d = Dinic::new(4);
        d.add_edge(0, 1, 1);
        d.add_edge(1, 2, 1);
        d.add_edge(2, 3, 1);
        assert_eq!(d.run(0, 3), 1);

        // two disjoint augmenting paths
        let mut d = Dinic::new(6);
        d.add_edge(0, 1, 1);
        d.add_edge(1, 5, 1);
        d.add_edge(0, 2, 1);
        d.add_edge(2, 5, 1);
        assert_eq!(d.run(0, 5), 2);
    }

    /// Flow value equals the brute-force min cut on random unit-capacity
    /// DAGs with at most 12 nodes.
    #[test]
    fn dinic_matches_min_cut_enumeration() {
        use rand::Rng;
        for seed in 0..50u64 {
            let mut rng = RngSeed(seed).rng();
            let n = rng.gen_range(4..=10usize);
            let mut edges: Vec<(usize, usize)> = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.45) {
                        edges.push((a, b));
                    }
                }
            }
            let (s, t) = (0, n - 1);
            let mut d = Dinic::new(n);
            for &(a, b) in &edges {
                d.add_edge(a, b, 1);
            }
            let flow = d.run(s, t);

            // min cut by enumerating all edge subsets is exponential in
            // |E|; enumerate vertex bipartitions instead (source side S)
            let mut min_cut = i64::MAX;
            for mask in 0..(1u32 << n) {
                if mask & 1 == 0 || mask >> (n - 1) & 1 == 1 {
                    continue;
                }
                let cut = edges
                    .iter()
                    .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 0)
                    .count() as i64;
                min_cut = min_cut.min(cut);
            }
            assert_eq!(flow, min_cut, "seed {}", seed);
        }
    }

    /// Flow saturation is equivalent to an f-restricted schedule existing.
    #[test]
    fn flow_value_iff_extension_exists() {
        for seed in 0..8u64 {
            let t = generate_block_graph(&[3, 2, 2], RngSeed(seed)).unwrap();
            let inst = uniform_unit(t.clone(), vec![2, 1, 1]);
            let cuts: Vec<u32> = t.cut_vertices().collect();
            let mut rng = RngSeed(seed ^ 0x5a5a).rng();
            for _ in 0..6 {
                use rand::Rng;
                let machines: Vec<u32> =
                    cuts.iter().map(|_| rng.gen_range(0..3u32)).collect();
                let valid = cuts.iter().enumerate().all(|(i, &u)| {
                    cuts.iter()
                        .enumerate()
                        .all(|(j, &w)| i == j || !(t.conflicts(u, w) && machines[i] == machines[j]))
                });
                if !valid {
                    continue;
                }
                let f = CutAssignment { cuts: cuts.clone(), machines };
                let c = ExactTime::ratio(1 + rng.gen_range(0..8u64), 2);
                let flow_ok = match build_flow_network(&inst, &c, &f) {
                    Ok(net) => max_flow(&net).0 == net.jobs.len() as i64,
                    Err(_) => false, // pinned load already exceeds capacity
                };
                assert_eq!(flow_ok, extension_exists(&inst, &c, &f), "seed {}", seed);
            }
        }
    }

    #[test]
    fn star_two_speeds() {
        // star K_{1,3}: center 0, leaves 1..3; speeds (2, 1) -> optimum 3/2
        let g = BlockCutTree::from_blocks(4, &[vec![0, 1], vec![0, 2], vec![0, 3]]).unwrap();
        let inst = uniform_unit(g, vec![2, 1]);
        let (sched, c) = solve_uniform_unit(&inst, &Budget::unlimited(), false).unwrap();
        assert!(is_feasible(&inst, &sched));
        assert_eq!(c, ExactTime::ratio(3, 2));
        assert_eq!(makespan(&inst, &sched), c);
        let (_, opt) = brute_force(&inst).unwrap();
        assert_eq!(c, opt);
    }

    #[test]
    fn single_block_forced() {
        let g = BlockCutTree::from_blocks(3, &[vec![0, 1, 2]]).unwrap();
        let inst = uniform_unit(g, vec![5, 2, 1]);
        let (sched, c) = solve_uniform_unit(&inst, &Budget::unlimited(), false).unwrap();
        assert!(is_feasible(&inst, &sched));
        assert_eq!(c, ExactTime::from_int(1)); // 1 / s_m = 1/1
        let _ = sched;
    }

    #[test]
    fn matches_oracle_small_sweep() {
        let speed_sets: Vec<Vec<u64>> = vec![vec![1, 1], vec![2, 1], vec![5, 2], vec![5, 2, 1]];
        for seed in 0..6u64 {
            for parts in [vec![2, 2], vec![3, 2], vec![2, 2, 2]] {
                let t = generate_block_graph(&parts, RngSeed(seed)).unwrap();
                for speeds in &speed_sets {
                    if t.max_block_size() > speeds.len() {
                        continue;
                    }
                    let inst = uniform_unit(t.clone(), speeds.clone());
                    let (sched, c) = solve_uniform_unit(&inst, &Budget::unlimited(), false).unwrap();
                    assert!(is_feasible(&inst, &sched));
                    assert!(makespan(&inst, &sched) <= c);
                    let (_, opt) = brute_force(&inst).unwrap();
                    assert_eq!(c, opt, "seed {} speeds {:?}", seed, speeds);
                }
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        for seed in 0..4u64 {
            let t = generate_block_graph(&[2, 2, 3], RngSeed(seed)).unwrap();
            let inst = uniform_unit(t, vec![5, 2, 1]);
            let (s1, c1) = solve_uniform_unit(&inst, &Budget::unlimited(), false).unwrap();
            let (s2, c2) = solve_uniform_unit(&inst, &Budget::unlimited(), true).unwrap();
            assert_eq!(c1, c2);
            assert_eq!(s1, s2);
        }
    }

    #[test]
    fn feasibility_monotone_in_candidates() {
        for seed in 0..4u64 {
            let t = generate_block_graph(&[2, 2, 2], RngSeed(seed)).unwrap();
            let inst = uniform_unit(t, vec![2, 1]);
            let cands = candidate_makespans(&inst).unwrap();
            let results: Vec<bool> = cands
                .iter()
                .map(|c| {
                    search_assignments(&inst, c, &Budget::unlimited(), false)
                        .unwrap()
                        .is_some()
                })
                .collect();
            let first_true = results.iter().position(|&r| r);
            if let Some(i) = first_true {
                assert!(results[i..].iter().all(|&r| r), "feasibility not monotone");
            }
        }
    }
}
