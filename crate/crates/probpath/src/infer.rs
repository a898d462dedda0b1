//! Reachability inference: the probability that two nodes are connected by a
//! simple path whose label string an acceptor accepts.
//!
//! Two engines share the same product-traversal idea (graph DFS running the
//! acceptor alongside, pruning dead states and node revisits):
//!
//! * [`exact_probability`] enumerates every possible world of a small graph
//!   and sums the probabilities of worlds containing an accepted path.
//! * [`estimate_batch`] / [`estimate_probability`] draw `n` worlds and report
//!   the fraction containing an accepted path. Edge outcomes come from a
//!   counter-based hash of `(pair seed, world index, edge index)`, so a world
//!   is never materialized: the DFS asks for edges only when it reaches them,
//!   each edge's outcome is a pure function of its coordinates, and results
//!   are bit-identical regardless of pair ordering, thread count, or schedule.
//!   The batch engine evaluates 64 worlds at once as bit-parallel masks and
//!   all acceptors of a query in one traversal.
//!
//! Seeds derive from node *identifiers*, not positions, so an estimate for a
//! pair is one fixed function of `(master seed, source id, target id, graph)`.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{EdgeId, NodeId, ProbabilisticGraph};
use crate::pattern::{Acceptor, AcceptorState, BoundAcceptor};

/// Default limit on `|E|` for exact enumeration (2^|E| worlds).
pub const DEFAULT_EXACT_EDGE_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InferError {
    #[error("source and target must differ")]
    SameEndpoints,
    #[error("node id {0} does not belong to this graph")]
    InvalidNode(u32),
    #[error("sample count must be at least 1")]
    ZeroSamples,
    #[error("a reachability query needs at least one acceptor")]
    NoAcceptors,
    #[error("graph has {edges} edges, exceeding the exact-enumeration cap {cap}; use the Monte Carlo estimator instead")]
    TooManyEdges { edges: usize, cap: usize },
}

/// Answers "is this edge present?" for one discrete world.
///
/// Implementations may draw the answer lazily; they must return the same
/// outcome every time the same edge is queried.
pub trait EdgePresence {
    fn edge_present(&mut self, edge: EdgeId) -> bool;
}

/// A fully specified world: a fixed subset of the graph's edges.
#[derive(Debug, Clone)]
pub struct FixedWorld {
    present: Vec<bool>,
}

impl FixedWorld {
    /// The world containing every edge of `graph`.
    pub fn all_present(graph: &ProbabilisticGraph) -> Self {
        Self { present: vec![true; graph.edge_count()] }
    }

    /// The world containing exactly `subset`.
    pub fn from_subset(graph: &ProbabilisticGraph, subset: &[EdgeId]) -> Self {
        let mut present = vec![false; graph.edge_count()];
        for &e in subset {
            present[e.index()] = true;
        }
        Self { present }
    }
}

impl EdgePresence for FixedWorld {
    fn edge_present(&mut self, edge: EdgeId) -> bool {
        self.present[edge.index()]
    }
}

/// Scrambles the bits of `z` (the standard 64-bit finalizer mix).
#[inline]
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// Derives the per-pair seed from a master seed and the endpoint node ids.
///
/// Using node identifiers (not list positions) makes batch estimates
/// independent of the order pairs are submitted in.
pub fn derive_pair_seed(master_seed: u64, source_id: &str, target_id: &str) -> u64 {
    // FNV-1a over "source\0target", then mixed with the master seed.
    const OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01B3;
    let mut h = OFFSET;
    for b in source_id.bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(PRIME);
    }
    h = h.wrapping_mul(PRIME); // separator
    for b in target_id.bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(PRIME);
    }
    mix64(master_seed ^ h)
}

/// Presence of one edge in one sampled world: a pure function of the pair
/// seed, the world index, the edge index, and the edge's probability.
#[inline]
pub fn edge_outcome(pair_seed: u64, world_index: u64, edge: EdgeId, prob: f64) -> bool {
    if prob >= 1.0 {
        return true;
    }
    let h = mix64(
        mix64(pair_seed ^ world_index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
            ^ (edge.index() as u64).wrapping_mul(0xD1B5_4A32_D192_ED03),
    );
    // Compare the top 53 bits against prob scaled to 2^53.
    (h >> 11) < (prob * 9_007_199_254_740_992.0) as u64
}

/// One lazily sampled world, with outcomes memoized per edge.
///
/// The memo means repeated queries for the same edge during a traversal
/// return one consistent outcome, and edges the traversal never reaches are
/// never drawn.
#[derive(Debug)]
pub struct WorldSample<'g> {
    graph: &'g ProbabilisticGraph,
    pair_seed: u64,
    world_index: u64,
    /// 0 = unsampled, 1 = absent, 2 = present.
    outcomes: Vec<u8>,
}

impl<'g> WorldSample<'g> {
    pub fn new(graph: &'g ProbabilisticGraph, pair_seed: u64, world_index: u64) -> Self {
        Self { graph, pair_seed, world_index, outcomes: vec![0; graph.edge_count()] }
    }

    pub fn world_index(&self) -> u64 {
        self.world_index
    }

    /// How many edges have been drawn so far.
    pub fn sampled_count(&self) -> usize {
        self.outcomes.iter().filter(|&&o| o != 0).count()
    }
}

impl EdgePresence for WorldSample<'_> {
    fn edge_present(&mut self, edge: EdgeId) -> bool {
        match self.outcomes[edge.index()] {
            1 => false,
            2 => true,
            _ => {
                let present =
                    edge_outcome(self.pair_seed, self.world_index, edge, self.graph.edge(edge).prob());
                self.outcomes[edge.index()] = if present { 2 } else { 1 };
                present
            }
        }
    }
}

/// True iff, in the world described by `world`, some simple path from
/// `source` to `target` has an accepted label string.
///
/// The DFS runs the acceptor in product with the traversal: it abandons a
/// branch when the acceptor state goes dead or a node would repeat, checks
/// the acceptor state *before* drawing an edge (so lazy worlds sample as few
/// edges as possible), and never extends a path beyond the target, since a
/// simple path can only visit it last.
pub fn exists_path(
    graph: &ProbabilisticGraph,
    world: &mut dyn EdgePresence,
    source: NodeId,
    target: NodeId,
    acceptor: &BoundAcceptor,
) -> Result<bool, InferError> {
    check_endpoints(graph, source, target)?;
    let max_depth = acceptor.max_accepted_len();
    if max_depth == 0 {
        return Ok(false);
    }
    let mut visited = vec![false; graph.node_count()];
    visited[source.index()] = true;
    let found = dfs_world(graph, world, source, target, acceptor, acceptor.start(), &mut visited, max_depth);
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn dfs_world(
    graph: &ProbabilisticGraph,
    world: &mut dyn EdgePresence,
    node: NodeId,
    target: NodeId,
    acceptor: &BoundAcceptor,
    state: AcceptorState,
    visited: &mut [bool],
    budget: usize,
) -> bool {
    for entry in graph.adjacency(node) {
        if visited[entry.neighbor.index()] {
            continue;
        }
        let next = acceptor.step(state, entry.label);
        if acceptor.is_dead(next) {
            continue;
        }
        if entry.neighbor == target {
            if acceptor.is_accepting(next) && world.edge_present(entry.edge) {
                return true;
            }
            continue;
        }
        if budget <= 1 {
            continue;
        }
        if !world.edge_present(entry.edge) {
            continue;
        }
        visited[entry.neighbor.index()] = true;
        let found =
            dfs_world(graph, world, entry.neighbor, target, acceptor, next, visited, budget - 1);
        visited[entry.neighbor.index()] = false;
        if found {
            return true;
        }
    }
    false
}

/// Exact language-constrained reachability probability by enumerating every
/// possible world, with the default edge cap.
pub fn exact_probability(
    graph: &ProbabilisticGraph,
    source: NodeId,
    target: NodeId,
    acceptor: &Acceptor,
) -> Result<f64, InferError> {
    exact_probability_capped(graph, source, target, acceptor, DEFAULT_EXACT_EDGE_CAP)
}

/// Exact probability with a caller-chosen cap on `|E|`.
///
/// Worlds excluding a probability-1 edge have probability zero, so the
/// enumeration only toggles edges with probability < 1; the sum is identical
/// to the full 2^|E| enumeration.
pub fn exact_probability_capped(
    graph: &ProbabilisticGraph,
    source: NodeId,
    target: NodeId,
    acceptor: &Acceptor,
    cap: usize,
) -> Result<f64, InferError> {
    check_endpoints(graph, source, target)?;
    if graph.edge_count() > cap {
        return Err(InferError::TooManyEdges { edges: graph.edge_count(), cap });
    }
    let bound = acceptor.bind(graph);
    if bound.max_accepted_len() == 0 {
        return Ok(0.0);
    }
    let uncertain: Vec<EdgeId> =
        graph.edges().filter(|(_, e)| e.prob() < 1.0).map(|(id, _)| id).collect();
    assert!(uncertain.len() < 63, "edge cap keeps the subset mask in range");

    let mut world = FixedWorld::all_present(graph);
    let mut visited = vec![false; graph.node_count()];
    let max_depth = bound.max_accepted_len();
    let mut total = 0.0;
    for mask in 0u64..(1u64 << uncertain.len()) {
        let mut world_prob = 1.0;
        for (bit, &e) in uncertain.iter().enumerate() {
            let p = graph.edge(e).prob();
            let present = mask >> bit & 1 == 1;
            world.present[e.index()] = present;
            world_prob *= if present { p } else { 1.0 - p };
        }
        if world_prob == 0.0 {
            continue;
        }
        visited[source.index()] = true;
        let found =
            dfs_world(graph, &mut world, source, target, &bound, bound.start(), &mut visited, max_depth);
        visited[source.index()] = false;
        if found {
            total += world_prob;
        }
    }
    Ok(total)
}

/// A Monte Carlo reachability query: one node pair, one or more acceptors
/// evaluated in the same sampled worlds, a sample count, and a master seed.
#[derive(Debug, Clone)]
pub struct ReachQuery<'a> {
    pub source: NodeId,
    pub target: NodeId,
    pub acceptors: &'a [Acceptor],
    pub samples: usize,
    pub seed: u64,
}

/// Monte Carlo estimates for one pair: per-acceptor success counts over `n`
/// worlds and the derived probabilities `successes / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachEstimate {
    pub probabilities: Vec<f64>,
    pub successes: Vec<u64>,
    pub samples: usize,
}

/// Estimates one query. Equivalent to a batch of one pair: the result for a
/// pair depends only on the master seed, the node identifiers, the graph,
/// and the acceptors.
pub fn estimate_probability(
    graph: &ProbabilisticGraph,
    query: &ReachQuery,
) -> Result<ReachEstimate, InferError> {
    let mut results =
        estimate_batch(graph, &[(query.source, query.target)], query.acceptors, query.samples, query.seed)?;
    Ok(results.pop().expect("batch of one yields one estimate"))
}

/// Estimates every pair against every acceptor.
///
/// For each pair, `n` worlds are sampled (worlds are shared across that
/// pair's acceptors) and each acceptor's success count is the number of
/// worlds containing an accepted simple path. Pairs are processed in
/// parallel; the output is ordered like the input and bit-identical for a
/// given `(graph, pairs, acceptors, samples, master_seed)` regardless of
/// thread count.
pub fn estimate_batch(
    graph: &ProbabilisticGraph,
    pairs: &[(NodeId, NodeId)],
    acceptors: &[Acceptor],
    samples: usize,
    master_seed: u64,
) -> Result<Vec<ReachEstimate>, InferError> {
    if acceptors.is_empty() {
        return Err(InferError::NoAcceptors);
    }
    if samples == 0 {
        return Err(InferError::ZeroSamples);
    }
    for &(s, t) in pairs {
        check_endpoints(graph, s, t)?;
    }
    let bound: Vec<BoundAcceptor> = acceptors.iter().map(|a| a.bind(graph)).collect();
    let max_depth = bound.iter().map(|b| b.max_accepted_len()).max().unwrap_or(0);

    let estimates: Vec<ReachEstimate> = pairs
        .par_iter()
        .map_init(
            || PairScratch::new(graph, bound.len()),
            |scratch, &(source, target)| {
                let pair_seed =
                    derive_pair_seed(master_seed, graph.node(source).id(), graph.node(target).id());
                let successes = sample_pair(graph, &bound, max_depth, source, target, pair_seed, samples, scratch);
                let probabilities =
                    successes.iter().map(|&s| s as f64 / samples as f64).collect();
                ReachEstimate { probabilities, successes, samples }
            },
        )
        .collect();
    Ok(estimates)
}

fn check_endpoints(
    graph: &ProbabilisticGraph,
    source: NodeId,
    target: NodeId,
) -> Result<(), InferError> {
    for n in [source, target] {
        if n.index() >= graph.node_count() {
            return Err(InferError::InvalidNode(n.index() as u32));
        }
    }
    if source == target {
        return Err(InferError::SameEndpoints);
    }
    Ok(())
}

/// Reusable per-worker buffers for the bit-parallel sampler.
struct PairScratch {
    /// Memoized 64-world presence masks, validated by `stamp == epoch`.
    edge_masks: Vec<u64>,
    stamp: Vec<u32>,
    epoch: u32,
    visited: Vec<bool>,
    /// Acceptor states per DFS depth (row 0 = at the source).
    states: Vec<Vec<AcceptorState>>,
    /// Worlds accepted so far, per acceptor, within the current chunk.
    accepted: Vec<u64>,
    /// Per-lane world hash prefix, shared by every edge of the chunk.
    world_mix: [u64; 64],
}

impl PairScratch {
    fn new(graph: &ProbabilisticGraph, n_acceptors: usize) -> Self {
        Self {
            edge_masks: vec![0; graph.edge_count()],
            stamp: vec![0; graph.edge_count()],
            epoch: 0,
            visited: vec![false; graph.node_count()],
            states: Vec::new(),
            accepted: vec![0; n_acceptors],
            world_mix: [0; 64],
        }
    }
}

/// Samples `n` worlds for one pair, 64 at a time, returning per-acceptor
/// success counts.
#[allow(clippy::too_many_arguments)]
fn sample_pair(
    graph: &ProbabilisticGraph,
    bound: &[BoundAcceptor],
    max_depth: usize,
    source: NodeId,
    target: NodeId,
    pair_seed: u64,
    samples: usize,
    scratch: &mut PairScratch,
) -> Vec<u64> {
    let k = bound.len();
    let mut successes = vec![0u64; k];
    if max_depth == 0 {
        return successes;
    }
    if scratch.states.len() < max_depth + 1 {
        scratch.states.resize(max_depth + 1, vec![AcceptorState::default(); k]);
    }

    let chunks = samples.div_ceil(64);
    for chunk in 0..chunks {
        let base_world = (chunk * 64) as u64;
        let width = (samples - chunk * 64).min(64);
        let full = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };

        scratch.epoch = scratch.epoch.wrapping_add(1);
        if scratch.epoch == 0 {
            // Stamp wrapped; invalidate everything explicitly.
            scratch.stamp.fill(u32::MAX);
            scratch.epoch = 1;
        }
        for a in &mut scratch.accepted {
            *a = 0;
        }
        for (j, b) in bound.iter().enumerate() {
            scratch.states[0][j] = b.start();
        }
        for (w, slot) in scratch.world_mix.iter_mut().enumerate().take(width) {
            *slot = mix64(pair_seed ^ (base_world + w as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        }

        let mut walk = MaskWalk {
            graph,
            bound,
            target,
            max_depth,
            width,
            full,
            scratch: &mut *scratch,
            done: false,
        };
        walk.scratch.visited[source.index()] = true;
        walk.dfs(source, 0, full);
        walk.scratch.visited[source.index()] = false;

        for (j, &mask) in scratch.accepted.iter().enumerate() {
            successes[j] += u64::from(mask.count_ones());
        }
    }
    successes
}

/// One chunk's bit-parallel product DFS: `path_mask` tracks the worlds (bits)
/// in which every edge of the current path is present.
struct MaskWalk<'a, 'g> {
    graph: &'g ProbabilisticGraph,
    bound: &'a [BoundAcceptor],
    target: NodeId,
    max_depth: usize,
    width: usize,
    full: u64,
    scratch: &'a mut PairScratch,
    done: bool,
}

impl MaskWalk<'_, '_> {
    /// The 64-world presence mask of an edge, memoized per chunk.
    #[inline]
    fn edge_mask(&mut self, edge: EdgeId) -> u64 {
        let i = edge.index();
        if self.scratch.stamp[i] == self.scratch.epoch {
            return self.scratch.edge_masks[i];
        }
        let prob = self.graph.edge(edge).prob();
        let mask = if prob >= 1.0 {
            self.full
        } else {
            let threshold = (prob * 9_007_199_254_740_992.0) as u64;
            let salted = (i as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
            let mut m = 0u64;
            for w in 0..self.width {
                let h = mix64(self.scratch.world_mix[w] ^ salted);
                if (h >> 11) < threshold {
                    m |= 1u64 << w;
                }
            }
            m
        };
        self.scratch.stamp[i] = self.scratch.epoch;
        self.scratch.edge_masks[i] = mask;
        mask
    }

    /// Records accepted worlds for all accepting acceptors on arrival at the
    /// target with `mask`; flips `done` when nothing further can be gained.
    fn record_arrival(&mut self, depth: usize, mask: u64) {
        let mut all_full = true;
        for j in 0..self.bound.len() {
            let state = self.scratch.states[depth + 1][j];
            if self.bound[j].is_accepting(state) {
                self.scratch.accepted[j] |= mask;
            }
            all_full &= self.scratch.accepted[j] == self.full;
        }
        if all_full {
            self.done = true;
        }
    }

    fn dfs(&mut self, node: NodeId, depth: usize, path_mask: u64) {
        let graph = self.graph;
        let bound = self.bound;
        let k = bound.len();
        let budget = self.max_depth - depth;

        if budget == 1 {
            // Only a direct edge to the target can still complete a path.
            for label in graph.label_ids() {
                let mut any_accepting = false;
                for j in 0..k {
                    let next = bound[j].step(self.scratch.states[depth][j], label);
                    self.scratch.states[depth + 1][j] = next;
                    any_accepting |= bound[j].is_accepting(next);
                }
                if !any_accepting {
                    continue;
                }
                if let Some(edge) = graph.edge_between(node, self.target, label) {
                    let mask = path_mask & self.edge_mask(edge);
                    if mask != 0 {
                        self.record_arrival(depth, mask);
                        if self.done {
                            return;
                        }
                    }
                }
            }
            return;
        }

        let mut current_label = None;
        let mut all_dead = true;
        let mut any_accepting = false;
        for ai in 0..graph.adjacency(node).len() {
            let entry = graph.adjacency(node)[ai];
            if self.scratch.visited[entry.neighbor.index()] {
                continue;
            }
            if current_label != Some(entry.label) {
                current_label = Some(entry.label);
                all_dead = true;
                any_accepting = false;
                for j in 0..k {
                    let next = bound[j].step(self.scratch.states[depth][j], entry.label);
                    self.scratch.states[depth + 1][j] = next;
                    all_dead &= bound[j].is_dead(next);
                    any_accepting |= bound[j].is_accepting(next);
                }
            }
            if all_dead {
                continue;
            }
            if entry.neighbor == self.target {
                if any_accepting {
                    let mask = path_mask & self.edge_mask(entry.edge);
                    if mask != 0 {
                        self.record_arrival(depth, mask);
                        if self.done {
                            return;
                        }
                    }
                }
                continue;
            }
            let mask = path_mask & self.edge_mask(entry.edge);
            if mask == 0 {
                continue;
            }
            // Worlds where some still-live acceptor has not accepted yet;
            // extending the path helps only in those.
            let mut needed = 0u64;
            for j in 0..k {
                let next = self.scratch.states[depth + 1][j];
                if !bound[j].is_dead(next) {
                    needed |= mask & !self.scratch.accepted[j];
                }
            }
            if needed == 0 {
                continue;
            }
            self.scratch.visited[entry.neighbor.index()] = true;
            // A recursive call at depth+1 only writes state rows depth+2 and
            // beyond, so this label group's row stays valid across it.
            self.dfs(entry.neighbor, depth + 1, needed);
            self.scratch.visited[entry.neighbor.index()] = false;
            if self.done {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;

    fn acceptor(pattern: &str) -> Acceptor {
        parse_pattern(pattern).unwrap().compile().unwrap()
    }

    fn chain_graph() -> ProbabilisticGraph {
        // u -simU(0.5)- v -r3(1.0)- i
        let mut g = ProbabilisticGraph::new();
        g.add_node("u", "user").unwrap();
        g.add_node("v", "user").unwrap();
        g.add_node("i", "item").unwrap();
        g.add_edge("u", "v", "simU", 0.5).unwrap();
        g.add_edge("v", "i", "r3", 1.0).unwrap();
        g
    }

    #[test]
    fn exists_path_follows_language() {
        let g = chain_graph();
        let u = g.node_id("u").unwrap();
        let i = g.node_id("i").unwrap();
        let yes = acceptor("simU.r3").bind(&g);
        let no = acceptor("simU.r2").bind(&g);
        let mut world = FixedWorld::all_present(&g);
        assert!(exists_path(&g, &mut world, u, i, &yes).unwrap());
        assert!(!exists_path(&g, &mut world, u, i, &no).unwrap());
    }

    #[test]
    fn exists_path_respects_world() {
        let g = chain_graph();
        let u = g.node_id("u").unwrap();
        let i = g.node_id("i").unwrap();
        let acc = acceptor("simU.r3").bind(&g);
        let rating = g
            .edge_between(g.node_id("v").unwrap(), i, g.label_id("r3").unwrap())
            .unwrap();
        let mut world = FixedWorld::from_subset(&g, &[rating]);
        assert!(!exists_path(&g, &mut world, u, i, &acc).unwrap());
    }

    #[test]
    fn simple_path_rule_blocks_cyclic_matches() {
        // Square s - a - v1 - b - t - c - v2 - d - s: the walk s,v1,t,v2,s
        // spells a.b.c.d but revisits s; no simple s→t path is accepted.
        let mut g = ProbabilisticGraph::new();
        for n in ["s", "v1", "t", "v2"] {
            g.add_node(n, "x").unwrap();
        }
        g.add_edge("s", "v1", "a", 1.0).unwrap();
        g.add_edge("v1", "t", "b", 1.0).unwrap();
        g.add_edge("t", "v2", "c", 1.0).unwrap();
        g.add_edge("v2", "s", "d", 1.0).unwrap();
        let s = g.node_id("s").unwrap();
        let t = g.node_id("t").unwrap();
        let mut world = FixedWorld::all_present(&g);
        let acc = acceptor("a.b.c.d").bind(&g);
        assert!(!exists_path(&g, &mut world, s, t, &acc).unwrap());
        let direct = acceptor("a.b").bind(&g);
        assert!(exists_path(&g, &mut world, s, t, &direct).unwrap());
    }

    #[test]
    fn exact_single_edge() {
        let mut g = ProbabilisticGraph::new();
        g.add_node("s", "x").unwrap();
        g.add_node("t", "x").unwrap();
        g.add_edge("s", "t", "a", 0.5).unwrap();
        let p = exact_probability(
            &g,
            g.node_id("s").unwrap(),
            g.node_id("t").unwrap(),
            &acceptor("a"),
        )
        .unwrap();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exact_two_edge_chain() {
        let mut g = ProbabilisticGraph::new();
        g.add_node("s", "x").unwrap();
        g.add_node("v", "x").unwrap();
        g.add_node("t", "x").unwrap();
        g.add_edge("s", "v", "a", 0.5).unwrap();
        g.add_edge("v", "t", "a", 0.5).unwrap();
        let p = exact_probability(
            &g,
            g.node_id("s").unwrap(),
            g.node_id("t").unwrap(),
            &acceptor("a.a"),
        )
        .unwrap();
        assert!((p - 0.25).abs() < 1e-15);
    }

    #[test]
    fn exact_two_disjoint_routes() {
        // Two node-disjoint routes, each passing with probability 0.25:
        // 1 - 0.75^2 = 0.4375.
        let mut g = ProbabilisticGraph::new();
        for n in ["s", "x", "y", "t"] {
            g.add_node(n, "n").unwrap();
        }
        g.add_edge("s", "x", "a", 0.5).unwrap();
        g.add_edge("x", "t", "a", 0.5).unwrap();
        g.add_edge("s", "y", "a", 0.5).unwrap();
        g.add_edge("y", "t", "a", 0.5).unwrap();
        let p = exact_probability(
            &g,
            g.node_id("s").unwrap(),
            g.node_id("t").unwrap(),
            &acceptor("a.a"),
        )
        .unwrap();
        assert!((p - 0.4375).abs() < 1e-12, "got {p}");
    }

    #[test]
    fn exact_rejects_same_endpoints_and_oversize() {
        let g = chain_graph();
        let u = g.node_id("u").unwrap();
        assert_eq!(
            exact_probability(&g, u, u, &acceptor("simU")),
            Err(InferError::SameEndpoints)
        );
        let i = g.node_id("i").unwrap();
        match exact_probability_capped(&g, u, i, &acceptor("simU.r3"), 1) {
            Err(InferError::TooManyEdges { edges: 2, cap: 1 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn estimate_certain_edge_is_always_one() {
        let mut g = ProbabilisticGraph::new();
        g.add_node("s", "x").unwrap();
        g.add_node("t", "x").unwrap();
        g.add_edge("s", "t", "a", 1.0).unwrap();
        let acc = [acceptor("a")];
        let q = ReachQuery {
            source: g.node_id("s").unwrap(),
            target: g.node_id("t").unwrap(),
            acceptors: &acc,
            samples: 257,
            seed: 42,
        };
        let est = estimate_probability(&g, &q).unwrap();
        assert_eq!(est.successes, vec![257]);
        assert_eq!(est.probabilities, vec![1.0]);
    }

    #[test]
    fn estimate_unmatchable_language_is_zero() {
        let g = chain_graph();
        let acc = [acceptor("zz.zz")];
        let q = ReachQuery {
            source: g.node_id("u").unwrap(),
            target: g.node_id("i").unwrap(),
            acceptors: &acc,
            samples: 100,
            seed: 7,
        };
        let est = estimate_probability(&g, &q).unwrap();
        assert_eq!(est.successes, vec![0]);
    }

    #[test]
    fn estimate_close_to_exact() {
        let g = chain_graph();
        let u = g.node_id("u").unwrap();
        let i = g.node_id("i").unwrap();
        let acc = acceptor("simU.r3");
        let exact = exact_probability(&g, u, i, &acc).unwrap();
        let accs = [acc];
        let q = ReachQuery { source: u, target: i, acceptors: &accs, samples: 10_000, seed: 11 };
        let est = estimate_probability(&g, &q).unwrap();
        let sigma = (exact * (1.0 - exact) / 10_000.0).sqrt();
        assert!(
            (est.probabilities[0] - exact).abs() <= 4.0 * sigma,
            "estimate {} vs exact {exact}",
            est.probabilities[0]
        );
    }

    #[test]
    fn estimates_are_deterministic_and_order_invariant() {
        let g = chain_graph();
        let u = g.node_id("u").unwrap();
        let v = g.node_id("v").unwrap();
        let i = g.node_id("i").unwrap();
        let accs = [acceptor("simU.r3"), acceptor("r3")];
        let forward = estimate_batch(&g, &[(u, i), (v, i)], &accs, 500, 99).unwrap();
        let backward = estimate_batch(&g, &[(v, i), (u, i)], &accs, 500, 99).unwrap();
        assert_eq!(forward[0], backward[1]);
        assert_eq!(forward[1], backward[0]);
        let again = estimate_batch(&g, &[(u, i), (v, i)], &accs, 500, 99).unwrap();
        assert_eq!(forward, again);
    }

    #[test]
    fn batch_of_one_matches_single_query() {
        let g = chain_graph();
        let u = g.node_id("u").unwrap();
        let i = g.node_id("i").unwrap();
        let accs = [acceptor("simU.r3")];
        let q = ReachQuery { source: u, target: i, acceptors: &accs, samples: 321, seed: 5 };
        let single = estimate_probability(&g, &q).unwrap();
        let batch = estimate_batch(&g, &[(u, i)], &accs, 321, 5).unwrap();
        assert_eq!(single, batch[0]);
    }

    #[test]
    fn superset_language_never_loses_worlds() {
        let mut g = ProbabilisticGraph::new();
        for n in ["s", "v", "w", "t"] {
            g.add_node(n, "n").unwrap();
        }
        g.add_edge("s", "v", "a", 0.4).unwrap();
        g.add_edge("v", "t", "a", 0.6).unwrap();
        g.add_edge("s", "w", "a", 0.5).unwrap();
        g.add_edge("w", "t", "a", 0.5).unwrap();
        g.add_edge("s", "t", "a", 0.3).unwrap();
        let narrow = acceptor("a");
        let wide = acceptor("a{1,2}");
        let accs = [narrow, wide];
        let est = estimate_batch(
            &g,
            &[(g.node_id("s").unwrap(), g.node_id("t").unwrap())],
            &accs,
            2000,
            13,
        )
        .unwrap();
        assert!(est[0].successes[0] <= est[0].successes[1]);
    }

    #[test]
    fn world_sample_outcomes_are_consistent_and_lazy() {
        let g = chain_graph();
        let mut world = WorldSample::new(&g, derive_pair_seed(3, "u", "i"), 17);
        assert_eq!(world.sampled_count(), 0);
        let (e, _) = g.edges().next().unwrap();
        let first = world.edge_present(e);
        for _ in 0..5 {
            assert_eq!(world.edge_present(e), first);
        }
        assert_eq!(world.sampled_count(), 1);
    }

    #[test]
    fn edge_outcome_matches_probability_in_aggregate() {
        let mut g = ProbabilisticGraph::new();
        g.add_node("s", "x").unwrap();
        g.add_node("t", "x").unwrap();
        g.add_edge("s", "t", "a", 0.3).unwrap();
        let (e, _) = g.edges().next().unwrap();
        let n = 100_000u64;
        let hits = (0..n)
            .filter(|&w| edge_outcome(derive_pair_seed(1, "s", "t"), w, e, 0.3))
            .count() as f64;
        let rate = hits / n as f64;
        assert!((rate - 0.3).abs() < 0.01, "rate {rate}");
    }

    #[test]
    fn batch_validates_inputs() {
        let g = chain_graph();
        let u = g.node_id("u").unwrap();
        let i = g.node_id("i").unwrap();
        let accs = [acceptor("simU")];
        assert_eq!(
            estimate_batch(&g, &[(u, u)], &accs, 10, 0),
            Err(InferError::SameEndpoints)
        );
        assert_eq!(
            estimate_batch(&g, &[(u, i)], &accs, 0, 0),
            Err(InferError::ZeroSamples)
        );
        assert_eq!(estimate_batch(&g, &[(u, i)], &[], 10, 0), Err(InferError::NoAcceptors));
    }
}
