//! Coloring-pattern dynamic program deciding whether unit jobs on identical
//! machines admit a schedule with at most k jobs per machine, i.e. whether
//! the conflict graph has a proper m-coloring with every class of size <= k.
//!
//! A pattern for a partial coloring is a pair of vectors (a, b) of length
//! k+1: a[i] counts the colors of cardinality i used by the anchored object
//! (a cut-vertex or a subset of a block), b[i] counts all other colors of
//! cardinality i. Each pattern carries one sample coloring as a witness.

use std::collections::HashMap;
use std::rc::Rc;

use crate::budget::{Budget, SolveError};
use crate::graph::BlockCutTree;
use crate::model::{Instance, MachineEnv, Schedule};

/// Cardinality histogram: hist[i] = number of colors with exactly i vertices.
pub type Hist = Vec<u8>;

/// Sample coloring, sorted by job id; colors are 0..m.
pub type Witness = Vec<(u32, u8)>;

/// What a pattern set describes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Anchor {
    /// All descendants of a vertex (a cut-vertex, or the chosen root).
    Vertex(u32),
    /// D(U) for a subset U of a block (parent cut-vertex excluded).
    Subset(Vec<u32>),
    /// D_d(v): the d-th child subtree of v, v included (1-based).
    Subtree(u32, usize),
}

impl Anchor {
    /// The vertices whose colors populate the `a` side of a pattern.
    pub fn used_vertices(&self) -> Vec<u32> {
        match self {
            Anchor::Vertex(v) | Anchor::Subtree(v, _) => vec![*v],
            Anchor::Subset(u) => u.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub a: Hist,
    pub b: Hist,
    pub witness: Witness,
}

/// Deduplicated patterns keyed by (a, b); the first witness found is kept.
#[derive(Debug, Clone)]
pub struct PatternSet {
    pub anchor: Anchor,
    map: std::collections::BTreeMap<(Hist, Hist), Witness>,
}

impl PatternSet {
    fn new(anchor: Anchor) -> Self {
        PatternSet {
            anchor,
            map: Default::default(),
        }
    }

    fn insert(&mut self, a: Hist, b: Hist, witness: impl FnOnce() -> Witness) {
        self.map.entry((a, b)).or_insert_with(witness);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Pattern> + '_ {
        self.map.iter().map(|((a, b), w)| Pattern {
            a: a.clone(),
            b: b.clone(),
            witness: w.clone(),
        })
    }

    pub fn keys(&self) -> impl Iterator<Item = &(Hist, Hist)> {
        self.map.keys()
    }

    pub fn contains(&self, a: &[u8], b: &[u8]) -> bool {
        self.map.contains_key(&(a.to_vec(), b.to_vec()))
    }

    #[cfg(test)]
    pub(crate) fn from_raw(anchor: Anchor, items: Vec<(Hist, Hist, Witness)>) -> Self {
        let mut s = PatternSet::new(anchor);
        for (a, b, w) in items {
            s.insert(a, b, || w);
        }
        s
    }
}

/// Options for the pattern recursion.
#[derive(Debug, Clone, Copy, Default)]
pub struct PatternOpts {
    /// Abort the whole run as soon as any intermediate set becomes empty
    /// (an empty set anywhere already implies a NO answer).
    pub early_abort: bool,
}

fn unit(card: usize, k: usize) -> Hist {
    let mut h = vec![0u8; k + 1];
    h[card] += 1;
    h
}

fn single_card(a: &[u8]) -> usize {
    let mut found = None;
    for (i, &c) in a.iter().enumerate() {
        if c > 0 {
            assert!(c == 1 && found.is_none(), "anchor must use a single color");
            found = Some(i);
        }
    }
    found.expect("anchor uses one color")
}

fn witness_color_of(w: &Witness, v: u32) -> u8 {
    w[w.binary_search_by_key(&v, |&(j, _)| j).expect("vertex covered")].1
}

fn color_cards(w: &Witness, m_colors: usize) -> Vec<usize> {
    let mut cards = vec![0usize; m_colors];
    for &(_, c) in w {
        cards[c as usize] += 1;
    }
    cards
}

/// Group palette colors by cardinality, ascending color id, skipping `skip`.
fn colors_by_card(cards: &[usize], k: usize, skip: &[u8]) -> Vec<Vec<u8>> {
    let mut by = vec![Vec::new(); k + 1];
    for (c, &card) in cards.iter().enumerate() {
        if skip.contains(&(c as u8)) {
            continue;
        }
        if card <= k {
            by[card].push(c as u8);
        }
    }
    by
}

/// The single pattern of a simplicial vertex: one color of cardinality 1,
/// m-1 colors of cardinality 0.
pub fn simplicial_pattern(v: u32, m: usize, k: usize) -> PatternSet {
    let mut s = PatternSet::new(Anchor::Vertex(v));
    let mut b = vec![0u8; k + 1];
    b[0] = (m - 1) as u8;
    s.insert(unit(1, k), b, || vec![(v, 0)]);
    s
}

type FreeMergeMap = std::collections::BTreeMap<Hist, Vec<(u8, u8)>>;

/// All distinct histograms from pairing every color of `x` with exactly one
/// color of `y` (cardinalities add, sums above k are rejected), with one
/// witnessing pairing per result.
fn merge_free(
    x: &Hist,
    y: &Hist,
    k: usize,
    memo: &mut HashMap<(Hist, Hist), Rc<FreeMergeMap>>,
) -> Rc<FreeMergeMap> {
    if let Some(r) = memo.get(&(x.clone(), y.clone())) {
        return r.clone();
    }
    let mut out = FreeMergeMap::new();
    match x.iter().position(|&c| c > 0) {
        None => {
            debug_assert!(y.iter().all(|&c| c == 0));
            out.insert(vec![0u8; k + 1], Vec::new());
        }
        Some(i) => {
            let mut xs = x.clone();
            xs[i] -= 1;
            for j in 0..=k.saturating_sub(i) {
                if y[j] == 0 || i + j > k {
                    continue;
                }
                let mut ys = y.clone();
                ys[j] -= 1;
                let sub = merge_free(&xs, &ys, k, memo);
                for (h, ops) in sub.iter() {
                    let mut cand = h.clone();
                    cand[i + j] += 1;
                    out.entry(cand).or_insert_with(|| {
                        let mut o = Vec::with_capacity(ops.len() + 1);
                        o.push((i as u8, j as u8));
                        o.extend_from_slice(ops);
                        o
                    });
                }
            }
        }
    }
    let rc = Rc::new(out);
    memo.insert((x.clone(), y.clone()), rc.clone());
    rc
}

/// Merging a set of already merged patterns MP(v, d-1) with P_d(v): the two
/// colors of v are identified (cardinalities added minus one) and the
/// remaining m-1 colors of each side are matched one-to-one.
pub fn merge_child_patterns(
    mp: &PatternSet,
    pd: &PatternSet,
    d: usize,
    m: usize,
    k: usize,
    budget: &Budget,
) -> Result<PatternSet, SolveError> {
    let v = match mp.anchor {
        Anchor::Vertex(v) | Anchor::Subtree(v, _) => v,
        _ => panic!("merge_child_patterns anchored at a vertex"),
    };
    if d == 1 {
        let mut out = PatternSet::new(Anchor::Vertex(v));
        for p in pd.iter() {
            out.insert(p.a, p.b, || p.witness);
        }
        return Ok(out);
    }
    let mut out = PatternSet::new(Anchor::Vertex(v));
    let mut memo = HashMap::new();
    for p1 in mp.iter() {
        budget.check_time()?;
        let card1 = single_card(&p1.a);
        for p2 in pd.iter() {
            let card2 = single_card(&p2.a);
            let merged_card = card1 + card2 - 1;
            if merged_card > k {
                continue;
            }
            let results = merge_free(&p1.b, &p2.b, k, &mut memo);
            for (hist, ops) in results.iter() {
                out.insert(unit(merged_card, k), hist.clone(), || {
                    stitch_vertex_merge(&p1.witness, &p2.witness, v, ops, m, k)
                });
            }
        }
    }
    budget.alloc_entries(out.len())?;
    Ok(out)
}

/// Build a concrete coloring for a vertex-anchored merge: v's two colors are
/// identified and the remaining colors are matched per `ops`.
fn stitch_vertex_merge(
    w1: &Witness,
    w2: &Witness,
    v: u32,
    ops: &[(u8, u8)],
    m: usize,
    k: usize,
) -> Witness {
    let alpha = witness_color_of(w1, v);
    let beta = witness_color_of(w2, v);
    let cards1 = color_cards(w1, m);
    let cards2 = color_cards(w2, m);
    let mut avail1 = colors_by_card(&cards1, k, &[alpha]);
    let mut avail2 = colors_by_card(&cards2, k, &[beta]);
    let mut mapping = vec![u8::MAX; m];
    mapping[beta as usize] = alpha;
    for &(i, j) in ops {
        let c1 = avail1[i as usize].remove(0);
        let c2 = avail2[j as usize].remove(0);
        mapping[c2 as usize] = c1;
    }
    let mut out = w1.clone();
    for &(job, c) in w2 {
        if job == v {
            continue;
        }
        out.push((job, mapping[c as usize]));
    }
    out.sort_unstable_by_key(|&(j, _)| j);
    out
}

/// Merging P(U) with P(u) for the next vertex u of a block: u's own color
/// may only be identified with a color not used by U; the other colors of
/// u's side merge freely with used or unused colors of U's side.
pub fn merge_block_vertex(
    p_subset: &PatternSet,
    p_u: &PatternSet,
    m: usize,
    k: usize,
    budget: &Budget,
) -> Result<PatternSet, SolveError> {
    let u = match p_u.anchor {
        Anchor::Vertex(u) | Anchor::Subtree(u, _) => u,
        _ => panic!("P(u) anchored at a vertex"),
    };
    let subset = match &p_subset.anchor {
        Anchor::Subset(s) => s.clone(),
        _ => panic!("P(U) anchored at a subset"),
    };
    let mut new_subset = subset.clone();
    new_subset.push(u);
    new_subset.sort_unstable();
    if subset.is_empty() {
        let mut out = PatternSet::new(Anchor::Subset(new_subset));
        for p in p_u.iter() {
            out.insert(p.a, p.b, || p.witness);
        }
        return Ok(out);
    }
    let mut out = PatternSet::new(Anchor::Subset(new_subset));
    let mut memo = HashMap::new();
    for p1 in p_subset.iter() {
        budget.check_time()?;
        for p2 in p_u.iter() {
            let card_u = single_card(&p2.a);
            for i in 0..=k - card_u {
                if p1.b[i] == 0 {
                    continue;
                }
                let mut b_rem = p1.b.clone();
                b_rem[i] -= 1;
                let tails = merge_tagged(&p1.a, &b_rem, &p2.b, k, &mut memo);
                for ((ta, tb), ops) in tails.iter() {
                    let mut a_fin = ta.clone();
                    a_fin[i + card_u] += 1;
                    out.insert(a_fin, tb.clone(), || {
                        stitch_subset_merge(&p1.witness, &p2.witness, &subset, u, i, ops, m, k)
                    });
                }
            }
        }
    }
    budget.alloc_entries(out.len())?;
    Ok(out)
}

type TaggedMergeMap = std::collections::BTreeMap<(Hist, Hist), Vec<(bool, u8, u8)>>;

/// Match every color of `y` with either a used color (from `a_rem`) or a
/// free color (from `b_rem`); results split into (merged-with-used,
/// merged-with-free) histograms.
fn merge_tagged(
    a_rem: &Hist,
    b_rem: &Hist,
    y: &Hist,
    k: usize,
    memo: &mut HashMap<(Hist, Hist, Hist), Rc<TaggedMergeMap>>,
) -> Rc<TaggedMergeMap> {
    let key = (a_rem.clone(), b_rem.clone(), y.clone());
    if let Some(r) = memo.get(&key) {
        return r.clone();
    }
    let mut out = TaggedMergeMap::new();
    match y.iter().position(|&c| c > 0) {
        None => {
            if a_rem.iter().all(|&c| c == 0) && b_rem.iter().all(|&c| c == 0) {
                out.insert((vec![0u8; k + 1], vec![0u8; k + 1]), Vec::new());
            }
        }
        Some(j) => {
            let mut ys = y.clone();
            ys[j] -= 1;
            for l in 0..=k.saturating_sub(j) {
                if a_rem[l] > 0 {
                    let mut ar = a_rem.clone();
                    ar[l] -= 1;
                    let sub = merge_tagged(&ar, b_rem, &ys, k, memo);
                    for ((ta, tb), ops) in sub.iter() {
                        let mut a2 = ta.clone();
                        a2[l + j] += 1;
                        out.entry((a2, tb.clone())).or_insert_with(|| {
                            let mut o = Vec::with_capacity(ops.len() + 1);
                            o.push((true, l as u8, j as u8));
                            o.extend_from_slice(ops);
                            o
                        });
                    }
                }
                if b_rem[l] > 0 {
                    let mut br = b_rem.clone();
                    br[l] -= 1;
                    let sub = merge_tagged(a_rem, &br, &ys, k, memo);
                    for ((ta, tb), ops) in sub.iter() {
                        let mut b2 = tb.clone();
                        b2[l + j] += 1;
                        out.entry((ta.clone(), b2)).or_insert_with(|| {
                            let mut o = Vec::with_capacity(ops.len() + 1);
                            o.push((false, l as u8, j as u8));
                            o.extend_from_slice(ops);
                            o
                        });
                    }
                }
            }
        }
    }
    let rc = Rc::new(out);
    memo.insert(key, rc.clone());
    rc
}

fn stitch_subset_merge(
    w_subset: &Witness,
    w_u: &Witness,
    subset: &[u32],
    u: u32,
    anchor_merge_card: usize,
    ops: &[(bool, u8, u8)],
    m: usize,
    k: usize,
) -> Witness {
    let gamma = witness_color_of(w_u, u);
    let used_colors: Vec<u8> = subset
        .iter()
        .map(|&x| witness_color_of(w_subset, x))
        .collect();
    let cards_subset = color_cards(w_subset, m);
    let cards_u = color_cards(w_u, m);
    // u's color goes to a free color of cardinality anchor_merge_card
    let mut free_by_card = colors_by_card(&cards_subset, k, &used_colors);
    let target = free_by_card[anchor_merge_card].remove(0);
    let mut used_by_card = vec![Vec::new(); k + 1];
    for &c in &used_colors {
        used_by_card[cards_subset[c as usize]].push(c);
    }
    for lst in used_by_card.iter_mut() {
        lst.sort_unstable();
    }
    let mut skip_u = vec![gamma];
    let mut avail_u = colors_by_card(&cards_u, k, &skip_u);
    skip_u.clear();
    let mut mapping = vec![u8::MAX; m];
    mapping[gamma as usize] = target;
    for &(used, l, j) in ops {
        let cu = avail_u[j as usize].remove(0);
        let cs = if used {
            used_by_card[l as usize].remove(0)
        } else {
            free_by_card[l as usize].remove(0)
        };
        mapping[cu as usize] = cs;
    }
    let mut out = w_subset.clone();
    for &(job, c) in w_u {
        out.push((job, mapping[c as usize]));
    }
    out.sort_unstable_by_key(|&(j, _)| j);
    out
}

/// Compute P_d(v) from P(B \ {v}): v takes one of the colors not used by
/// B \ {v} (cardinality grows by one), everything else is lumped into b.
pub fn lift_block_to_cut(
    p_block: &PatternSet,
    v: u32,
    d: usize,
    m: usize,
    k: usize,
    budget: &Budget,
) -> Result<PatternSet, SolveError> {
    let members = match &p_block.anchor {
        Anchor::Subset(s) => s.clone(),
        _ => panic!("P(B minus v) anchored at a subset"),
    };
    let mut out = PatternSet::new(Anchor::Subtree(v, d));
    for p in p_block.iter() {
        budget.check_time()?;
        for l in 0..k {
            if p.b[l] == 0 {
                continue;
            }
            let mut b_new = vec![0u8; k + 1];
            for i in 0..=k {
                b_new[i] = p.a[i] + p.b[i];
            }
            b_new[l] -= 1;
            out.insert(unit(l + 1, k), b_new, || {
                let used: Vec<u8> = members
                    .iter()
                    .map(|&x| witness_color_of(&p.witness, x))
                    .collect();
                let cards = color_cards(&p.witness, m);
                let free = colors_by_card(&cards, k, &used);
                let chosen = free[l][0];
                let mut w = p.witness.clone();
                w.push((v, chosen));
                w.sort_unstable_by_key(|&(j, _)| j);
                w
            });
        }
    }
    budget.alloc_entries(out.len())?;
    Ok(out)
}

/// All patterns P(r) for the subgraph hanging below the anchor vertex r,
/// via post-order composition of the three merge procedures. The tree must
/// be connected; the anchor is vertex 0.
pub fn all_patterns(
    tree: &BlockCutTree,
    m: usize,
    k: usize,
    budget: &Budget,
    opts: PatternOpts,
) -> Result<PatternSet, SolveError> {
    if !tree.is_connected() {
        return Err(SolveError::InvalidInput(
            "all_patterns expects a connected graph; see decide_bounded_makespan".into(),
        ));
    }
    patterns_for_vertex(tree, 0, None, m, k, budget, opts)
}

fn patterns_for_vertex(
    tree: &BlockCutTree,
    v: u32,
    parent_block: Option<u32>,
    m: usize,
    k: usize,
    budget: &Budget,
    opts: PatternOpts,
) -> Result<PatternSet, SolveError> {
    budget.check_time()?;
    let mut child_blocks: Vec<u32> = tree
        .vertex_blocks(v)
        .iter()
        .copied()
        .filter(|&b| Some(b) != parent_block)
        .collect();
    // plane order: ascending minimum non-anchor vertex id
    child_blocks.sort_by_key(|&b| {
        tree.blocks()[b as usize]
            .iter()
            .copied()
            .find(|&u| u != v)
            .unwrap_or(v)
    });

    let mut mp = simplicial_pattern(v, m, k);
    for (idx, &b) in child_blocks.iter().enumerate() {
        let d = idx + 1;
        let members: Vec<u32> = tree.blocks()[b as usize]
            .iter()
            .copied()
            .filter(|&u| u != v)
            .collect();
        let mut p_subset = PatternSet::new(Anchor::Subset(Vec::new()));
        for &u in &members {
            let p_u = if tree.vertex_blocks(u).len() > 1 {
                patterns_for_vertex(tree, u, Some(b), m, k, budget, opts)?
            } else {
                simplicial_pattern(u, m, k)
            };
            let next = merge_block_vertex(&p_subset, &p_u, m, k, budget)?;
            budget.free_entries(p_subset.len() + p_u.len());
            p_subset = next;
            if opts.early_abort && p_subset.is_empty() {
                return Ok(PatternSet::new(Anchor::Vertex(v)));
            }
        }
        let p_d = lift_block_to_cut(&p_subset, v, d, m, k, budget)?;
        budget.free_entries(p_subset.len());
        if opts.early_abort && p_d.is_empty() {
            return Ok(PatternSet::new(Anchor::Vertex(v)));
        }
        let next = merge_child_patterns(&mp, &p_d, d, m, k, budget)?;
        budget.free_entries(mp.len() + p_d.len());
        mp = next;
        if opts.early_abort && mp.is_empty() {
            return Ok(PatternSet::new(Anchor::Vertex(v)));
        }
    }
    Ok(mp)
}

/// Decide P | block graph, unit jobs | C_max <= k and return a schedule with
/// at most k jobs per machine, or `Infeasible`.
///
/// Disconnected graphs get a dummy cut-vertex connecting the components and
/// one extra color; the final patterns are then filtered to those where the
/// dummy keeps a color of its own (a = 1^1).
pub fn decide_bounded_makespan(
    inst: &Instance,
    k: usize,
    budget: &Budget,
    opts: PatternOpts,
) -> Result<Schedule, SolveError> {
    if !matches!(inst.env, MachineEnv::Identical { .. }) {
        return Err(SolveError::WrongEnvironment(
            "identical machines required".into(),
        ));
    }
    if !inst.is_unit() {
        return Err(SolveError::WrongEnvironment("unit jobs required".into()));
    }
    let m = inst.m();
    let n = inst.n();
    if n == 0 {
        return Ok(Schedule::new(Vec::new()));
    }
    if inst.graph.max_block_size() > m {
        return Err(SolveError::Infeasible(format!(
            "largest block has {} jobs but only {} machines",
            inst.graph.max_block_size(),
            m
        )));
    }
    if k == 0 {
        return Err(SolveError::Infeasible("k = 0 with jobs present".into()));
    }

    if inst.graph.is_connected() {
        let set = all_patterns(&inst.graph, m, k, budget, opts)?;
        let Some(p) = set.iter().next() else {
            return Err(SolveError::Infeasible(format!(
                "no coloring with all classes <= {}",
                k
            )));
        };
        return Ok(decode_witness(&p.witness, n, None));
    }

    // Dummy root: a fresh vertex joined to the smallest vertex of every
    // component, plus one extra color reserved for it.
    let dummy = n as u32;
    let mut blocks: Vec<Vec<u32>> = inst.graph.blocks().to_vec();
    let mut seen_comp = std::collections::BTreeSet::new();
    for v in 0..n as u32 {
        if seen_comp.insert(inst.graph.component_of(v)) {
            blocks.push(vec![v, dummy]);
        }
    }
    let g2 = BlockCutTree::from_blocks(n + 1, &blocks)
        .map_err(|e| SolveError::InvalidInput(e.to_string()))?;
    let set = patterns_for_vertex(&g2, dummy, None, m + 1, k, budget, opts)?;
    let one = unit(1, k);
    let chosen = set.iter().find(|p| p.a == one);
    let Some(p) = chosen else {
        return Err(SolveError::Infeasible(format!(
            "no coloring with all classes <= {}",
            k
        )));
    };
    let dummy_color = witness_color_of(&p.witness, dummy);
    Ok(decode_witness(&p.witness, n, Some(dummy_color)))
}

/// Turn a witness coloring into a schedule: colors become machines, the
/// dummy color (if any) is skipped.
fn decode_witness(witness: &Witness, n: usize, dummy_color: Option<u8>) -> Schedule {
    let mut remap = std::collections::BTreeMap::new();
    let mut next = 0u32;
    let mut assign = vec![0u32; n];
    let mut colors: Vec<u8> = witness.iter().map(|&(_, c)| c).collect();
    colors.sort_unstable();
    colors.dedup();
    for c in colors {
        if Some(c) == dummy_color {
            continue;
        }
        remap.insert(c, next);
        next += 1;
    }
    for &(job, c) in witness {
        if (job as usize) < n {
            assign[job as usize] = remap[&c];
        }
    }
    Schedule::new(assign)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::tests::example_graph;
    use crate::graph::{generate_block_graph, RngSeed};
    use crate::model::is_feasible;
    use crate::oracle::brute_force;
    use std::collections::BTreeSet;

    fn keys(set: &PatternSet) -> BTreeSet<(Hist, Hist)> {
        set.keys().cloned().collect()
    }

    fn pat(a: &[u8], b: &[u8]) -> (Hist, Hist) {
        (a.to_vec(), b.to_vec())
    }

    /// Project every proper coloring of the subgraph induced by `cover`
    /// onto its (a, b) pattern; classes above k are dropped.
    pub(crate) fn brute_force_patterns(
        tree: &BlockCutTree,
        cover: &[u32],
        anchor_used: &[u32],
        m: usize,
        k: usize,
    ) -> BTreeSet<(Hist, Hist)> {
        let mut out = BTreeSet::new();
        let mut coloring = vec![0u8; cover.len()];
        loop {
            let proper = {
                let mut ok = true;
                'outer: for (i, &u) in cover.iter().enumerate() {
                    for (j, &w) in cover.iter().enumerate().skip(i + 1) {
                        if coloring[i] == coloring[j] && tree.conflicts(u, w) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                ok
            };
            if proper {
                let mut cards = vec![0usize; m];
                for &c in &coloring {
                    cards[c as usize] += 1;
                }
                if cards.iter().all(|&c| c <= k) {
                    let mut a = vec![0u8; k + 1];
                    let mut b = vec![0u8; k + 1];
                    let anchor_colors: BTreeSet<u8> = anchor_used
                        .iter()
                        .map(|&v| {
                            let idx = cover.iter().position(|&x| x == v).unwrap();
                            coloring[idx]
                        })
                        .collect();
                    for (c, &card) in cards.iter().enumerate() {
                        if anchor_colors.contains(&(c as u8)) {
                            a[card] += 1;
                        } else {
                            b[card] += 1;
                        }
                    }
                    out.insert((a, b));
                }
            }
            // odometer
            let mut i = 0;
            loop {
                if i == coloring.len() {
                    return out;
                }
                coloring[i] += 1;
                if (coloring[i] as usize) < m {
                    break;
                }
                coloring[i] = 0;
                i += 1;
            }
        }
    }

    /// Witness must be a proper coloring of exactly the anchored subgraph
    /// with class cardinalities matching (a, b).
    pub(crate) fn check_witness_soundness(tree: &BlockCutTree, set: &PatternSet, m: usize, k: usize) {
        let anchor_used = set.anchor.used_vertices();
        for p in set.iter() {
            for (i, &(u, cu)) in p.witness.iter().enumerate() {
                for &(w, cw) in &p.witness[i + 1..] {
                    assert!(
                        !(cu == cw && tree.conflicts(u, w)),
                        "witness colors adjacent {} and {} alike",
                        u,
                        w
                    );
                }
            }
            let cards = color_cards(&p.witness, m);
            let anchor_colors: BTreeSet<u8> = anchor_used
                .iter()
                .map(|&v| witness_color_of(&p.witness, v))
                .collect();
            let mut a = vec![0u8; k + 1];
            let mut b = vec![0u8; k + 1];
            for (c, &card) in cards.iter().enumerate() {
                assert!(card <= k, "class larger than k in witness");
                if anchor_colors.contains(&(c as u8)) {
                    a[card] += 1;
                } else {
                    b[card] += 1;
                }
            }
            assert_eq!(a, p.a, "witness a-histogram mismatch");
            assert_eq!(b, p.b, "witness b-histogram mismatch");
        }
    }

    #[test]
    fn simplicial_patterns() {
        let s = simplicial_pattern(6, 3, 3);
        assert_eq!(keys(&s), BTreeSet::from([pat(&[0, 1, 0, 0], &[2, 0, 0, 0])]));
        let s = simplicial_pattern(0, 1, 1);
        assert_eq!(keys(&s), BTreeSet::from([pat(&[0, 1], &[0, 0])]));
        let s = simplicial_pattern(0, 2, 2);
        assert_eq!(keys(&s), BTreeSet::from([pat(&[0, 1, 0], &[1, 0, 0])]));
    }

    /// The worked nine-vertex example at m = 3, k = 3, stage by stage.
    #[test]
    fn worked_example_stages() {
        let tree = example_graph();
        let (m, k) = (3usize, 3usize);
        let budget = Budget::unlimited();

        // block {J3, J5, J6}: P({J5}) then P({J5, J6})
        let p5 = simplicial_pattern(4, m, k);
        let p6 = simplicial_pattern(5, m, k);
        let empty = PatternSet::new(Anchor::Subset(Vec::new()));
        let p_5 = merge_block_vertex(&empty, &p5, m, k, &budget).unwrap();
        assert_eq!(keys(&p_5), BTreeSet::from([pat(&[0, 1, 0, 0], &[2, 0, 0, 0])]));
        let p_56 = merge_block_vertex(&p_5, &p6, m, k, &budget).unwrap();
        assert_eq!(
            keys(&p_56),
            BTreeSet::from([pat(&[0, 2, 0, 0], &[1, 0, 0, 0])])
        );
        check_witness_soundness(&tree, &p_56, m, k);

        // P_1(J3) from P({J5, J6})
        let p1_j3 = lift_block_to_cut(&p_56, 2, 1, m, k, &budget).unwrap();
        assert_eq!(
            keys(&p1_j3),
            BTreeSet::from([pat(&[0, 1, 0, 0], &[0, 2, 0, 0])])
        );

        // block {J3, J7}: P({J7}) and P_2(J3)
        let p7 = simplicial_pattern(6, m, k);
        let p_7 = merge_block_vertex(&empty, &p7, m, k, &budget).unwrap();
        assert_eq!(keys(&p_7), BTreeSet::from([pat(&[0, 1, 0, 0], &[2, 0, 0, 0])]));
        let p2_j3 = lift_block_to_cut(&p_7, 2, 2, m, k, &budget).unwrap();
        assert_eq!(
            keys(&p2_j3),
            BTreeSet::from([pat(&[0, 1, 0, 0], &[1, 1, 0, 0])])
        );

        // MP(J3, 2) = P(J3)
        let p_j3 = merge_child_patterns(&p1_j3, &p2_j3, 2, m, k, &budget).unwrap();
        assert_eq!(
            keys(&p_j3),
            BTreeSet::from([pat(&[0, 1, 0, 0], &[0, 1, 1, 0])])
        );
        check_witness_soundness(&tree, &p_j3, m, k);

        // subtree of J4 via {J4, J8} and {J4, J9}
        let p_8 = merge_block_vertex(&empty, &simplicial_pattern(7, m, k), m, k, &budget).unwrap();
        let p1_j4 = lift_block_to_cut(&p_8, 3, 1, m, k, &budget).unwrap();
        let p_9 = merge_block_vertex(&empty, &simplicial_pattern(8, m, k), m, k, &budget).unwrap();
        let p2_j4 = lift_block_to_cut(&p_9, 3, 2, m, k, &budget).unwrap();
        let p_j4 = merge_child_patterns(&p1_j4, &p2_j4, 2, m, k, &budget).unwrap();
        assert_eq!(
            keys(&p_j4),
            BTreeSet::from([
                pat(&[0, 1, 0, 0], &[0, 2, 0, 0]),
                pat(&[0, 1, 0, 0], &[1, 0, 1, 0])
            ])
        );

        // block {J2, J3, J4}: P({J3}) then P({J3, J4})
        let p_sub3 = merge_block_vertex(&empty, &p_j3, m, k, &budget).unwrap();
        let p_34 = merge_block_vertex(&p_sub3, &p_j4, m, k, &budget).unwrap();
        assert_eq!(
            keys(&p_34),
            BTreeSet::from([
                pat(&[0, 0, 1, 1], &[0, 0, 1, 0]),
                pat(&[0, 0, 2, 0], &[0, 0, 0, 1]),
                pat(&[0, 0, 0, 2], &[0, 1, 0, 0]),
                pat(&[0, 1, 0, 1], &[0, 0, 0, 1])
            ])
        );
        check_witness_soundness(&tree, &p_34, m, k);

        // P(J2) = P_1(J2)
        let p_j2 = lift_block_to_cut(&p_34, 1, 1, m, k, &budget).unwrap();
        assert_eq!(
            keys(&p_j2),
            BTreeSet::from([
                pat(&[0, 0, 0, 1], &[0, 0, 1, 1]),
                pat(&[0, 0, 1, 0], &[0, 0, 0, 2])
            ])
        );

        // block {J1, J2}: P(J1) = P_1(J1)
        let p_sub2 = merge_block_vertex(&empty, &p_j2, m, k, &budget).unwrap();
        let p_j1 = lift_block_to_cut(&p_sub2, 0, 1, m, k, &budget).unwrap();
        assert_eq!(
            keys(&p_j1),
            BTreeSet::from([pat(&[0, 0, 0, 1], &[0, 0, 0, 2])])
        );
    }

    #[test]
    fn all_patterns_matches_worked_example() {
        let tree = example_graph();
        let set = all_patterns(&tree, 3, 3, &Budget::unlimited(), PatternOpts::default()).unwrap();
        assert_eq!(
            keys(&set),
            BTreeSet::from([pat(&[0, 0, 0, 1], &[0, 0, 0, 2])])
        );
        check_witness_soundness(&tree, &set, 3, 3);
    }

    #[test]
    fn merge_child_d1_verbatim() {
        let tree = example_graph();
        let (m, k) = (3, 3);
        let budget = Budget::unlimited();
        let empty = PatternSet::new(Anchor::Subset(Vec::new()));
        let p_7 = merge_block_vertex(&empty, &simplicial_pattern(6, m, k), m, k, &budget).unwrap();
        let p1 = lift_block_to_cut(&p_7, 2, 1, m, k, &budget).unwrap();
        let seed = simplicial_pattern(2, m, k);
        let merged = merge_child_patterns(&seed, &p1, 1, m, k, &budget).unwrap();
        assert_eq!(keys(&merged), keys(&p1));
        let _ = tree;
    }

    #[test]
    fn lift_discards_full_colors() {
        // all m colors already at cardinality k: no color left for v
        let w: Witness = vec![(10, 0), (11, 0), (12, 1), (13, 1), (14, 2), (15, 2)];
        let set = PatternSet::from_raw(
            Anchor::Subset(vec![10]),
            vec![(vec![0, 0, 1], vec![0, 0, 2], w)],
        );
        let out = lift_block_to_cut(&set, 9, 1, 3, 2, &Budget::unlimited()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn single_clique_patterns() {
        // K_3 on 3 machines: the anchor keeps one cardinality-1 color and
        // the two other colors have cardinality 1 as well.
        let g = crate::graph::BlockCutTree::from_blocks(3, &[vec![0, 1, 2]]).unwrap();
        for k in [1usize, 2, 3] {
            let set =
                all_patterns(&g, 3, k, &Budget::unlimited(), PatternOpts::default()).unwrap();
            let expect = brute_force_patterns(&g, &[0, 1, 2], &[0], 3, k);
            assert_eq!(keys(&set), expect, "k = {}", k);
            let mut want_a = vec![0u8; k + 1];
            want_a[1] = 1;
            let mut want_b = vec![0u8; k + 1];
            want_b[1] = 2;
            assert!(set.contains(&want_a, &want_b));
        }
    }

    #[test]
    fn path_p4_matches_brute_force() {
        let g = crate::graph::BlockCutTree::from_blocks(
            4,
            &[vec![0, 1], vec![1, 2], vec![2, 3]],
        )
        .unwrap();
        let set = all_patterns(&g, 2, 2, &Budget::unlimited(), PatternOpts::default()).unwrap();
        let expect = brute_force_patterns(&g, &[0, 1, 2, 3], &[0], 2, 2);
        assert_eq!(keys(&set), expect);
        check_witness_soundness(&g, &set, 2, 2);
    }

    #[test]
    fn random_subtree_merge_matches_brute_force() {
        // random graphs: D(anchor) patterns equal brute-force projections
        for seed in 0..8u64 {
            let t = generate_block_graph(&[3, 2, 2], RngSeed(seed)).unwrap();
            for k in 1..=4usize {
                let set =
                    all_patterns(&t, 3, k, &Budget::unlimited(), PatternOpts::default()).unwrap();
                let cover: Vec<u32> = (0..t.n() as u32).collect();
                let expect = brute_force_patterns(&t, &cover, &[0], 3, k);
                assert_eq!(keys(&set), expect, "seed {} k {}", seed, k);
                check_witness_soundness(&t, &set, 3, k);
            }
        }
    }

    #[test]
    fn decide_example_schedules_three_per_machine() {
        let g = example_graph();
        let inst = Instance::new(g, MachineEnv::Identical { m: 3 }, Some(vec![1; 9])).unwrap();
        let sched =
            decide_bounded_makespan(&inst, 3, &Budget::unlimited(), PatternOpts::default())
                .unwrap();
        assert!(is_feasible(&inst, &sched));
        let mut counts = [0u32; 3];
        for &mi in &sched.assign {
            counts[mi as usize] += 1;
        }
        assert_eq!(counts, [3, 3, 3]);
        // k = 2 must be infeasible (9 jobs, 3 machines)
        assert!(matches!(
            decide_bounded_makespan(&inst, 2, &Budget::unlimited(), PatternOpts::default()),
            Err(SolveError::Infeasible(_))
        ));
    }

    #[test]
    fn decide_k4_on_three_machines_infeasible() {
        let g = crate::graph::BlockCutTree::from_blocks(4, &[vec![0, 1, 2, 3]]).unwrap();
        let inst = Instance::new(g, MachineEnv::Identical { m: 3 }, Some(vec![1; 4])).unwrap();
        for k in 1..=4 {
            assert!(matches!(
                decide_bounded_makespan(&inst, k, &Budget::unlimited(), PatternOpts::default()),
                Err(SolveError::Infeasible(_))
            ));
        }
    }

    #[test]
    fn decide_disconnected_with_dummy_root() {
        // two disjoint edges on two machines: k = 2 works, k = 1 does not
        let g = crate::graph::BlockCutTree::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let inst =
            Instance::new(g, MachineEnv::Identical { m: 2 }, Some(vec![1; 4])).unwrap();
        let sched =
            decide_bounded_makespan(&inst, 2, &Budget::unlimited(), PatternOpts::default())
                .unwrap();
        assert!(is_feasible(&inst, &sched));
        assert!(matches!(
            decide_bounded_makespan(&inst, 1, &Budget::unlimited(), PatternOpts::default()),
            Err(SolveError::Infeasible(_))
        ));
    }

    #[test]
    fn decide_matches_oracle_on_small_sweep() {
        for seed in 0..6u64 {
            for parts in [vec![2, 2, 2], vec![3, 2], vec![3, 3]] {
                let t = generate_block_graph(&parts, RngSeed(seed)).unwrap();
                let n = t.n();
                for m in 2..=3usize {
                    if t.max_block_size() > m {
                        continue;
                    }
                    let inst = Instance::new(
                        t.clone(),
                        MachineEnv::Identical { m },
                        Some(vec![1; n]),
                    )
                    .unwrap();
                    let (_, opt) = brute_force(&inst).unwrap();
                    let opt = opt.floor_u64() as usize;
                    for k in 1..=4usize {
                        let res = decide_bounded_makespan(
                            &inst,
                            k,
                            &Budget::unlimited(),
                            PatternOpts::default(),
                        );
                        if k >= opt {
                            let sched = res.unwrap();
                            assert!(is_feasible(&inst, &sched));
                            let mut counts = vec![0usize; m];
                            for &mi in &sched.assign {
                                counts[mi as usize] += 1;
                            }
                            assert!(counts.iter().all(|&c| c <= k));
                        } else {
                            assert!(matches!(res, Err(SolveError::Infeasible(_))));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_in_k() {
        for seed in 0..5u64 {
            let t = generate_block_graph(&[2, 2, 3], RngSeed(seed)).unwrap();
            let inst = Instance::new(
                t.clone(),
                MachineEnv::Identical { m: 3 },
                Some(vec![1; t.n()]),
            )
            .unwrap();
            let mut feasible_seen = false;
            for k in 1..=5 {
                let ok = decide_bounded_makespan(
                    &inst,
                    k,
                    &Budget::unlimited(),
                    PatternOpts::default(),
                )
                .is_ok();
                assert!(!feasible_seen || ok, "feasibility must be monotone in k");
                feasible_seen |= ok;
            }
            assert!(feasible_seen);
        }
    }

    #[test]
    fn early_abort_same_answers() {
        for seed in 0..5u64 {
            let t = generate_block_graph(&[3, 2, 2], RngSeed(seed)).unwrap();
            let inst = Instance::new(
                t.clone(),
                MachineEnv::Identical { m: 3 },
                Some(vec![1; t.n()]),
            )
            .unwrap();
            for k in 1..=4 {
                let plain = decide_bounded_makespan(
                    &inst,
                    k,
                    &Budget::unlimited(),
                    PatternOpts::default(),
                )
                .is_ok();
                let fast = decide_bounded_makespan(
                    &inst,
                    k,
                    &Budget::unlimited(),
                    PatternOpts { early_abort: true },
                )
                .is_ok();
                assert_eq!(plain, fast);
            }
        }
    }

    #[test]
    fn memory_guard_trips() {
        let t = generate_block_graph(&[4, 4, 4, 4, 4, 4], RngSeed(1)).unwrap();
        let inst = Instance::new(
            t.clone(),
            MachineEnv::Identical { m: 6 },
            Some(vec![1; t.n()]),
        )
        .unwrap();
        let tiny = Budget::new(None, Some(0));
        assert!(matches!(
            decide_bounded_makespan(&inst, 4, &tiny, PatternOpts::default()),
            Err(SolveError::OutOfBudget)
        ));
    }
}
