//! Block-graph representation: validation, block-cut tree construction,
//! descendant queries, random generation, and tree-decomposition export.
//!
//! A block graph is a graph in which every maximal 2-connected component
//! (block) is a clique. The block-cut tree stores one node per block and one
//! per cut-vertex; total storage is O(n).

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("not a block graph: {0}")]
    NotABlockGraph(String),
    #[error("infeasible partition: {0}")]
    Infeasible(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid graph input: {0}")]
    InvalidInput(String),
}

/// Seed for deterministic generation; identical seed, identical output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Derive a stream-specific seed (stable across platforms).
    pub fn derive(self, a: u64, b: u64) -> RngSeed {
        fn splitmix(mut x: u64) -> u64 {
            x = x.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = x;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        }
        RngSeed(splitmix(splitmix(splitmix(self.0) ^ a) ^ b))
    }
}

/// Rooted block-cut forest of a block graph.
///
/// Blocks are stored as sorted vertex lists in lexicographic order; every
/// component is rooted at the block containing its minimum vertex and the
/// plane order of children is ascending by minimum vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCutTree {
    n: usize,
    blocks: Vec<Vec<u32>>,
    vertex_blocks: Vec<Vec<u32>>,
    is_cut: Vec<bool>,
    component: Vec<u32>,
    root_blocks: Vec<u32>,
    block_parent_cut: Vec<Option<u32>>,
    cut_parent_block: Vec<Option<u32>>,
    cut_child_blocks: Vec<Vec<u32>>,
}

impl BlockCutTree {
    /// Build and validate from adjacency lists.
    ///
    /// Every biconnected component must be a clique; isolated vertices become
    /// singleton blocks.
    pub fn validate_and_build(adjacency: &[Vec<u32>]) -> Result<Self, GraphError> {
        let n = adjacency.len();
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, nbrs) in adjacency.iter().enumerate() {
            for &w in nbrs {
                if (w as usize) >= n {
                    return Err(GraphError::InvalidInput(format!(
                        "neighbor {} out of range for n={}",
                        w, n
                    )));
                }
                if w as usize == u {
                    return Err(GraphError::InvalidInput(format!("self-loop at {}", u)));
                }
                adj[u].push(w);
            }
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for &w in list.iter() {
                if !adjacency[w as usize].contains(&(u as u32)) {
                    return Err(GraphError::InvalidInput(format!(
                        "edge {}-{} not symmetric",
                        u, w
                    )));
                }
            }
        }
        let blocks = biconnected_components(&adj)?;
        Self::from_parts(n, blocks)
    }

    /// Build from an explicit block list (the graph JSON form). The blocks
    /// are expanded to adjacency and re-derived, so overlapping or
    /// non-maximal inputs are canonicalized.
    pub fn from_blocks(n: usize, blocks: &[Vec<u32>]) -> Result<Self, GraphError> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        for b in blocks {
            for &v in b {
                if (v as usize) >= n {
                    return Err(GraphError::InvalidInput(format!(
                        "vertex {} out of range for n={}",
                        v, n
                    )));
                }
                seen[v as usize] = true;
            }
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    if b[i] == b[j] {
                        return Err(GraphError::InvalidInput(format!(
                            "duplicate vertex {} in block",
                            b[i]
                        )));
                    }
                    adj[b[i] as usize].push(b[j]);
                    adj[b[j] as usize].push(b[i]);
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            // Isolated vertices are fine as long as they are listed somewhere;
            // a vertex absent from every block still exists as a singleton.
            let _ = v;
        }
        Self::validate_and_build(&adj)
    }

    fn from_parts(n: usize, mut blocks: Vec<Vec<u32>>) -> Result<Self, GraphError> {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort();
        let mut vertex_blocks: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (bi, b) in blocks.iter().enumerate() {
            for &v in b {
                vertex_blocks[v as usize].push(bi as u32);
            }
        }
        let is_cut: Vec<bool> = vertex_blocks.iter().map(|bs| bs.len() >= 2).collect();

        // Component labels via the block overlap structure.
        let mut component = vec![u32::MAX; n];
        let mut comp = 0u32;
        for start in 0..n {
            if component[start] != u32::MAX {
                continue;
            }
            let mut stack = vec![start as u32];
            component[start] = comp;
            while let Some(v) = stack.pop() {
                for &bi in &vertex_blocks[v as usize] {
                    for &w in &blocks[bi as usize] {
                        if component[w as usize] == u32::MAX {
                            component[w as usize] = comp;
                            stack.push(w);
                        }
                    }
                }
            }
            comp += 1;
        }

        // Root each component at the (lexicographically first) block holding
        // its minimum vertex, then orient the bipartite tree.
        let mut comp_min = vec![u32::MAX; comp as usize];
        for v in 0..n {
            let c = component[v] as usize;
            if comp_min[c] == u32::MAX {
                comp_min[c] = v as u32;
            }
        }
        let mut root_blocks = vec![u32::MAX; comp as usize];
        for (bi, b) in blocks.iter().enumerate() {
            let c = component[b[0] as usize] as usize;
            if root_blocks[c] == u32::MAX && b.contains(&comp_min[c]) {
                root_blocks[c] = bi as u32;
            }
        }
        let mut block_parent_cut: Vec<Option<u32>> = vec![None; blocks.len()];
        let mut cut_parent_block: Vec<Option<u32>> = vec![None; n];
        let mut cut_child_blocks: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut visited = vec![false; blocks.len()];
        for &rb in &root_blocks {
            let mut stack = vec![rb];
            visited[rb as usize] = true;
            while let Some(bi) = stack.pop() {
                let parent = block_parent_cut[bi as usize];
                for &v in &blocks[bi as usize] {
                    if !is_cut[v as usize] || parent == Some(v) {
                        continue;
                    }
                    cut_parent_block[v as usize] = Some(bi);
                    let mut children: Vec<u32> = vertex_blocks[v as usize]
                        .iter()
                        .copied()
                        .filter(|&cb| cb != bi)
                        .collect();
                    // Plane order: ascending minimum vertex id among the
                    // non-shared vertices of each child block.
                    children.sort_by_key(|&cb| {
                        blocks[cb as usize]
                            .iter()
                            .copied()
                            .find(|&u| u != v)
                            .unwrap_or(v)
                    });
                    for &cb in &children {
                        if visited[cb as usize] {
                            return Err(GraphError::NotABlockGraph(
                                "block structure contains a cycle".into(),
                            ));
                        }
                        visited[cb as usize] = true;
                        block_parent_cut[cb as usize] = Some(v);
                        stack.push(cb);
                    }
                    cut_child_blocks[v as usize] = children;
                }
            }
        }

        Ok(BlockCutTree {
            n,
            blocks,
            vertex_blocks,
            is_cut,
            component,
            root_blocks,
            block_parent_cut,
            cut_parent_block,
            cut_child_blocks,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    pub fn is_cut(&self, v: u32) -> bool {
        self.is_cut[v as usize]
    }

    pub fn cut_vertices(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.n as u32).filter(|&v| self.is_cut[v as usize])
    }

    pub fn cut_count(&self) -> usize {
        self.is_cut.iter().filter(|&&c| c).count()
    }

    /// Blocks containing `v`, ascending.
    pub fn vertex_blocks(&self, v: u32) -> &[u32] {
        &self.vertex_blocks[v as usize]
    }

    pub fn component_of(&self, v: u32) -> u32 {
        self.component[v as usize]
    }

    pub fn component_count(&self) -> usize {
        self.root_blocks.len()
    }

    pub fn is_connected(&self) -> bool {
        self.root_blocks.len() <= 1
    }

    pub fn root_blocks(&self) -> &[u32] {
        &self.root_blocks
    }

    /// Parent cut-vertex of a block (None for component roots).
    pub fn block_parent_cut(&self, block: u32) -> Option<u32> {
        self.block_parent_cut[block as usize]
    }

    /// Parent block of a cut-vertex.
    pub fn cut_parent_block(&self, v: u32) -> Option<u32> {
        self.cut_parent_block[v as usize]
    }

    /// Ordered child blocks of a cut-vertex (plane order).
    pub fn cut_child_blocks(&self, v: u32) -> &[u32] {
        &self.cut_child_blocks[v as usize]
    }

    /// True iff `u` and `w` share a block (i.e. are adjacent).
    pub fn conflicts(&self, u: u32, w: u32) -> bool {
        if u == w {
            return false;
        }
        let (a, b) = (&self.vertex_blocks[u as usize], &self.vertex_blocks[w as usize]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Adjacency lists derived from the blocks.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); self.n];
        for b in &self.blocks {
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    adj[b[i] as usize].push(b[j]);
                    adj[b[j] as usize].push(b[i]);
                }
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Blocks in pre-order over all components.
    pub fn preorder_blocks(&self) -> Vec<u32> {
        let mut order = Vec::with_capacity(self.blocks.len());
        for &rb in &self.root_blocks {
            self.preorder_visit(rb, &mut order);
        }
        order
    }

    fn preorder_visit(&self, block: u32, order: &mut Vec<u32>) {
        order.push(block);
        let parent = self.block_parent_cut[block as usize];
        for &v in &self.blocks[block as usize] {
            if !self.is_cut[v as usize] || parent == Some(v) {
                continue;
            }
            for &cb in &self.cut_child_blocks[v as usize] {
                self.preorder_visit(cb, order);
            }
        }
    }

    /// D(v): v together with all vertices in blocks of the subtree rooted in
    /// the cut-vertex `v`. Includes `v` itself.
    pub fn descendants(&self, v: u32) -> Result<Vec<u32>, GraphError> {
        if !self.is_cut[v as usize] {
            return Err(GraphError::IndexOutOfRange(format!(
                "{} is not a cut-vertex",
                v
            )));
        }
        let mut out = BTreeSet::new();
        out.insert(v);
        for &cb in &self.cut_child_blocks[v as usize] {
            self.collect_block_subtree(cb, v, &mut out);
        }
        Ok(out.into_iter().collect())
    }

    /// D_d(v): v together with the vertices under the d-th child block of
    /// `v` (1-based plane order).
    pub fn descendants_d(&self, v: u32, d: usize) -> Result<Vec<u32>, GraphError> {
        if !self.is_cut[v as usize] {
            return Err(GraphError::IndexOutOfRange(format!(
                "{} is not a cut-vertex",
                v
            )));
        }
        let children = &self.cut_child_blocks[v as usize];
        if d == 0 || d > children.len() {
            return Err(GraphError::IndexOutOfRange(format!(
                "child index {} for cut-vertex {} with {} children",
                d,
                v,
                children.len()
            )));
        }
        let mut out = BTreeSet::new();
        out.insert(v);
        self.collect_block_subtree(children[d - 1], v, &mut out);
        Ok(out.into_iter().collect())
    }

    /// D(U) for U ⊆ B∖{v}: U plus the descendants of the cut-vertices in U.
    pub fn descendants_of_subset(
        &self,
        block: u32,
        v: u32,
        subset: &[u32],
    ) -> Result<Vec<u32>, GraphError> {
        let b = &self.blocks[block as usize];
        let mut out = BTreeSet::new();
        for &u in subset {
            if u == v || !b.contains(&u) {
                return Err(GraphError::IndexOutOfRange(format!(
                    "{} is not in block {} minus {}",
                    u, block, v
                )));
            }
            if self.is_cut[u as usize] && self.cut_parent_block[u as usize] == Some(block) {
                for &cb in &self.cut_child_blocks[u as usize] {
                    self.collect_block_subtree(cb, u, &mut out);
                }
            }
            out.insert(u);
        }
        Ok(out.into_iter().collect())
    }

    fn collect_block_subtree(&self, block: u32, parent: u32, out: &mut BTreeSet<u32>) {
        for &u in &self.blocks[block as usize] {
            out.insert(u);
            if u != parent
                && self.is_cut[u as usize]
                && self.cut_parent_block[u as usize] == Some(block)
            {
                for &cb in &self.cut_child_blocks[u as usize] {
                    self.collect_block_subtree(cb, u, out);
                }
            }
        }
    }

    /// One bag per block, adjacent bags sharing exactly their common
    /// cut-vertex, binarized so every internal node has exactly two children.
    pub fn tree_decomposition(&self) -> TreeDecomposition {
        let mut td = TreeDecomposition {
            bags: Vec::new(),
            children: Vec::new(),
            root: 0,
        };
        let mut comp_roots = Vec::new();
        for &rb in &self.root_blocks {
            comp_roots.push(self.decompose_block(rb, &mut td));
        }
        let root = match comp_roots.len() {
            0 => td.push_node(Vec::new(), Vec::new()),
            1 => comp_roots[0],
            _ => {
                // Join components under a comb of empty bags.
                let mut acc = comp_roots.pop().unwrap();
                while let Some(r) = comp_roots.pop() {
                    acc = td.push_node(Vec::new(), vec![r, acc]);
                }
                acc
            }
        };
        td.root = root;
        td
    }

    fn decompose_block(&self, block: u32, td: &mut TreeDecomposition) -> usize {
        let bag = self.blocks[block as usize].clone();
        let parent = self.block_parent_cut[block as usize];
        let mut child_blocks = Vec::new();
        for &v in &self.blocks[block as usize] {
            if !self.is_cut[v as usize] || parent == Some(v) {
                continue;
            }
            child_blocks.extend(self.cut_child_blocks[v as usize].iter().copied());
        }
        let mut child_nodes: Vec<usize> = child_blocks
            .into_iter()
            .map(|cb| self.decompose_block(cb, td))
            .collect();
        if child_nodes.is_empty() {
            return td.push_node(bag, Vec::new());
        }
        if child_nodes.len() == 1 {
            let empty = td.push_node(Vec::new(), Vec::new());
            child_nodes.push(empty);
        }
        // Comb of duplicated bags: each level has exactly two children.
        let mut acc = {
            let right = child_nodes.pop().unwrap();
            let left = child_nodes.pop().unwrap();
            td.push_node(bag.clone(), vec![left, right])
        };
        while let Some(left) = child_nodes.pop() {
            acc = td.push_node(bag.clone(), vec![left, acc]);
        }
        acc
    }
}

impl Serialize for BlockCutTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct GraphJson<'a> {
            n: usize,
            blocks: &'a [Vec<u32>],
        }
        GraphJson {
            n: self.n,
            blocks: &self.blocks,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BlockCutTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct GraphJson {
            n: usize,
            blocks: Vec<Vec<u32>>,
        }
        let g = GraphJson::deserialize(deserializer)?;
        BlockCutTree::from_blocks(g.n, &g.blocks).map_err(D::Error::custom)
    }
}

/// Tree decomposition in which every internal node has exactly two children.
#[derive(Debug, Clone)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<u32>>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

impl TreeDecomposition {
    fn push_node(&mut self, bag: Vec<u32>, children: Vec<usize>) -> usize {
        debug_assert!(children.is_empty() || children.len() == 2);
        self.bags.push(bag);
        self.children.push(children);
        self.bags.len() - 1
    }

    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Post-order over the nodes starting at the root.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.bags.len());
        let mut stack = vec![(self.root, false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                order.push(node);
            } else {
                stack.push((node, true));
                for &c in self.children[node].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }
}

/// Biconnected components by a single DFS with an edge stack; each component
/// must be a clique (c vertices, c(c-1)/2 edges). Isolated vertices become
/// singleton blocks.
fn biconnected_components(adj: &[Vec<u32>]) -> Result<Vec<Vec<u32>>, GraphError> {
    let n = adj.len();
    let mut disc = vec![0u32; n];
    let mut low = vec![0u32; n];
    let mut next_child = vec![0usize; n];
    let mut parent = vec![u32::MAX; n];
    let mut timer = 1u32;
    let mut edge_stack: Vec<(u32, u32)> = Vec::new();
    let mut blocks = Vec::new();

    let mut emit = |edges: &[(u32, u32)]| -> Result<(), GraphError> {
        let mut verts = BTreeSet::new();
        for &(a, b) in edges {
            verts.insert(a);
            verts.insert(b);
        }
        let c = verts.len();
        if edges.len() != c * (c - 1) / 2 {
            return Err(GraphError::NotABlockGraph(format!(
                "biconnected component on vertices {:?} has {} edges, a clique needs {}",
                verts,
                edges.len(),
                c * (c - 1) / 2
            )));
        }
        blocks.push(verts.into_iter().collect::<Vec<u32>>());
        Ok(())
    };

    for root in 0..n {
        if disc[root] != 0 || adj[root].is_empty() {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut stack = vec![root as u32];
        while let Some(&u) = stack.last() {
            let ui = u as usize;
            if next_child[ui] < adj[ui].len() {
                let w = adj[ui][next_child[ui]];
                next_child[ui] += 1;
                let wi = w as usize;
                if disc[wi] == 0 {
                    parent[wi] = u;
                    disc[wi] = timer;
                    low[wi] = timer;
                    timer += 1;
                    edge_stack.push((u, w));
                    stack.push(w);
                } else if w != parent[ui] && disc[wi] < disc[ui] {
                    edge_stack.push((u, w));
                    low[ui] = low[ui].min(disc[wi]);
                }
            } else {
                stack.pop();
                if let Some(&p) = stack.last() {
                    let pi = p as usize;
                    low[pi] = low[pi].min(low[ui]);
                    if low[ui] >= disc[pi] {
                        let pos = edge_stack
                            .iter()
                            .rposition(|&e| e == (p, u))
                            .expect("tree edge on stack");
                        let comp: Vec<(u32, u32)> = edge_stack.drain(pos..).collect();
                        emit(&comp)?;
                    }
                }
            }
        }
    }
    for v in 0..n {
        if adj[v].is_empty() {
            blocks.push(vec![v as u32]);
        }
    }
    Ok(blocks)
}

/// Which block-count function to use when generating instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BFn {
    Min,
    Avg,
    Max,
}

impl std::fmt::Display for BFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BFn::Min => write!(f, "min"),
            BFn::Avg => write!(f, "avg"),
            BFn::Max => write!(f, "max"),
        }
    }
}

/// b_min = ceil((n-1)/(m-1)), b_max = n-1, b_avg = floor((b_min+b_max)/2).
pub fn b_function(n: usize, m: usize, which: BFn) -> usize {
    assert!(n >= m && m >= 2, "b_function requires n >= m >= 2");
    let b_min = (n - 1).div_ceil(m - 1);
    let b_max = n - 1;
    match which {
        BFn::Min => b_min,
        BFn::Max => b_max,
        BFn::Avg => (b_min + b_max) / 2,
    }
}

/// Number of partitions of `total` into exactly `parts` parts, each within
/// [lo, hi] and no part exceeding `max_first` (parts are non-increasing).
fn partition_counts(total: usize, parts: usize, lo: usize, hi: usize) -> Vec<Vec<Vec<u128>>> {
    // table[t][p][v] = #partitions of t into p parts in [lo, min(hi, v)]
    let mut table = vec![vec![vec![0u128; hi + 1]; parts + 1]; total + 1];
    for v in 0..=hi {
        table[0][0][v] = 1;
    }
    for t in 0..=total {
        for p in 1..=parts {
            for v in lo..=hi {
                let mut acc = table[t][p][v - 1];
                if v <= t {
                    acc += table[t - v][p - 1][v];
                }
                table[t][p][v] = acc;
            }
            // values below lo admit no further parts
            for v in 0..lo.min(hi + 1) {
                table[t][p][v] = 0;
            }
        }
    }
    table
}

/// Sample a partition of `total` into exactly `parts` integers in [lo, hi],
/// uniformly over the valid multisets (largest part first in the result).
pub fn random_partition(
    total: usize,
    parts: usize,
    lo: usize,
    hi: usize,
    seed: RngSeed,
) -> Result<Vec<usize>, GraphError> {
    if parts == 0 || lo > hi || parts * lo > total || parts * hi < total {
        return Err(GraphError::Infeasible(format!(
            "no partition of {} into {} parts within [{}, {}]",
            total, parts, lo, hi
        )));
    }
    let table = partition_counts(total, parts, lo, hi);
    let total_count = table[total][parts][hi];
    if total_count == 0 {
        return Err(GraphError::Infeasible(format!(
            "no partition of {} into {} parts within [{}, {}]",
            total, parts, lo, hi
        )));
    }
    let mut rng = seed.rng();
    let mut index = rng.gen_range(0..total_count);
    let mut out = Vec::with_capacity(parts);
    let (mut t, mut p, mut maxv) = (total, parts, hi);
    while p > 0 {
        // Choose the largest part v, scanning upward through the count table.
        let mut v = lo;
        loop {
            // partitions whose largest part is exactly v
            let with_v = if v <= t { table[t - v][p - 1][v] } else { 0 };
            if index < with_v {
                out.push(v);
                t -= v;
                p -= 1;
                maxv = v;
                break;
            }
            index -= with_v;
            v += 1;
            assert!(v <= maxv, "count table inconsistent");
        }
    }
    Ok(out)
}

/// Generate a connected block graph with the given block sizes: shuffle the
/// sizes, seed the first clique, then attach each next block at a uniformly
/// random block and a uniformly random vertex within it.
pub fn generate_block_graph(partition: &[usize], seed: RngSeed) -> Result<BlockCutTree, GraphError> {
    if partition.is_empty() {
        return Err(GraphError::Infeasible("empty partition".into()));
    }
    if partition.len() == 1 && partition[0] == 0 {
        return Err(GraphError::Infeasible("zero-size block".into()));
    }
    if partition.len() > 1 && partition.iter().any(|&s| s < 2) {
        return Err(GraphError::Infeasible(
            "attached blocks need size >= 2".into(),
        ));
    }
    let mut rng = seed.rng();
    let mut sizes = partition.to_vec();
    sizes.shuffle(&mut rng);

    let mut blocks: Vec<Vec<u32>> = Vec::with_capacity(sizes.len());
    let first = sizes[0];
    blocks.push((0..first as u32).collect());
    let mut next_vertex = first as u32;
    for &s in &sizes[1..] {
        let bi = rng.gen_range(0..blocks.len());
        let vi = rng.gen_range(0..blocks[bi].len());
        let v = blocks[bi][vi];
        let mut block = vec![v];
        for _ in 0..s - 1 {
            block.push(next_vertex);
            next_vertex += 1;
        }
        blocks.push(block);
    }
    let n = next_vertex as usize;
    BlockCutTree::from_blocks(n, &blocks)
}
