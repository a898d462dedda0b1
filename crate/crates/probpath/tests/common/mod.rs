//! Independent test oracles.
//!
//! Everything here deliberately avoids the crate's production code paths:
//! the matcher walks the pattern AST directly (no automaton), the exact
//! oracle enumerates all `2^|E|` worlds and all simple paths (no pruning, no
//! product construction), and the optimizer oracle is plain gradient descent
//! with backtracking. Slow and obvious beats fast and shared.

#![allow(dead_code)]

use probpath::graph::{NodeId, ProbabilisticGraph};
use probpath::pattern::Ast;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Pattern-language oracle: recursive backtracking over the AST.

/// Does `labels` belong to the language of `ast`? Pure recursion on the
/// grammar, exponential and proud of it.
pub fn ast_matches(ast: &Ast, labels: &[&str]) -> bool {
    match ast {
        Ast::Literal(l) => labels.len() == 1 && labels[0] == l,
        Ast::Placeholder => panic!("oracle needs an expanded pattern"),
        Ast::Union(parts) => parts.iter().any(|p| ast_matches(p, labels)),
        Ast::Concat(parts) => concat_matches(parts, labels),
        Ast::Repeat(inner, m, n) => (*m..=*n).any(|j| power_matches(inner, j, labels)),
    }
}

fn concat_matches(parts: &[Ast], labels: &[&str]) -> bool {
    match parts.split_first() {
        None => labels.is_empty(),
        Some((head, rest)) => (0..=labels.len())
            .any(|cut| ast_matches(head, &labels[..cut]) && concat_matches(rest, &labels[cut..])),
    }
}

/// Exactly `j` concatenated copies of `inner`.
fn power_matches(inner: &Ast, j: u32, labels: &[&str]) -> bool {
    if j == 0 {
        return labels.is_empty();
    }
    (0..=labels.len()).any(|cut| {
        ast_matches(inner, &labels[..cut]) && power_matches(inner, j - 1, &labels[cut..])
    })
}

/// All strings over `alphabet` with length ≤ `max_len`.
pub fn all_strings<'a>(alphabet: &[&'a str], max_len: usize) -> Vec<Vec<&'a str>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &sym in alphabet {
                let mut t = s.clone();
                t.push(sym);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Exact-inference oracle: all worlds × all simple paths.

/// Probability that an accepted simple path connects `source` and `target`,
/// by brute force: every subset of edges is a world (probability-1 edges
/// included), and every simple path in that world is enumerated.
pub fn oracle_exact(
    graph: &ProbabilisticGraph,
    source: NodeId,
    target: NodeId,
    accepts: &dyn Fn(&[&str]) -> bool,
) -> f64 {
    let edges: Vec<f64> = graph.edges().map(|(_, e)| e.prob()).collect();
    assert!(edges.len() <= 20, "oracle is for small graphs");
    let mut total = 0.0;
    for mask in 0u64..(1u64 << edges.len()) {
        let mut world_prob = 1.0;
        let mut present = vec![false; edges.len()];
        for (bit, p) in edges.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                present[bit] = true;
                world_prob *= p;
            } else {
                world_prob *= 1.0 - p;
            }
        }
        if world_prob == 0.0 {
            continue;
        }
        if world_has_accepted_path(graph, &present, source, target, accepts) {
            total += world_prob;
        }
    }
    total
}

/// Does this world contain a simple path `source → target` whose label
/// string satisfies `accepts`?
pub fn world_has_accepted_path(
    graph: &ProbabilisticGraph,
    present: &[bool],
    source: NodeId,
    target: NodeId,
    accepts: &dyn Fn(&[&str]) -> bool,
) -> bool {
    let mut visited = vec![false; graph.node_count()];
    visited[source.index()] = true;
    let mut labels: Vec<&str> = Vec::new();
    path_dfs(graph, present, source, target, &mut visited, &mut labels, accepts)
}

fn path_dfs<'g>(
    graph: &'g ProbabilisticGraph,
    present: &[bool],
    node: NodeId,
    target: NodeId,
    visited: &mut Vec<bool>,
    labels: &mut Vec<&'g str>,
    accepts: &dyn Fn(&[&str]) -> bool,
) -> bool {
    if node == target {
        // A simple path visits the target exactly once, at its end.
        return accepts(labels);
    }
    for entry in graph.adjacency(node) {
        if !present[entry.edge.index()] || visited[entry.neighbor.index()] {
            continue;
        }
        visited[entry.neighbor.index()] = true;
        labels.push(graph.label(entry.label));
        let found = path_dfs(graph, present, entry.neighbor, target, visited, labels, accepts);
        labels.pop();
        visited[entry.neighbor.index()] = false;
        if found {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Random corpus generators.

pub const EDGE_LABELS: [&str; 7] = ["simU", "simI", "r1", "r2", "r3", "r4", "r5"];

/// A random connected-ish undirected graph with at most `max_edges` edges.
pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, max_edges: usize) -> ProbabilisticGraph {
    let nodes = rng.random_range(2..=max_nodes);
    let mut g = ProbabilisticGraph::new();
    for i in 0..nodes {
        let label = if rng.random_bool(0.5) { "user" } else { "item" };
        g.add_node(&format!("n{i}"), label).unwrap();
    }
    let edges = rng.random_range(1..=max_edges);
    let mut attempts = 0;
    while g.edge_count() < edges && attempts < 200 {
        attempts += 1;
        let a = rng.random_range(0..nodes);
        let b = rng.random_range(0..nodes);
        if a == b {
            continue;
        }
        let label = EDGE_LABELS[rng.random_range(0..EDGE_LABELS.len())];
        let prob = match rng.random_range(0..4) {
            0 => 1.0,
            _ => (rng.random_range(1..=9) as f64) / 10.0,
        };
        // Duplicate (pair, label) attempts are rejected by the graph; skip.
        let _ = g.add_edge(&format!("n{a}"), &format!("n{b}"), label, prob);
    }
    g
}

/// A random concrete pattern in the style of the built-in families: an
/// alternation of short sequences of labels with small repetition bounds.
pub fn random_pattern(rng: &mut ChaCha8Rng) -> String {
    let alts = rng.random_range(1..=2);
    let mut pieces = Vec::new();
    for _ in 0..alts {
        let terms = rng.random_range(1..=3);
        let mut seq = Vec::new();
        for _ in 0..terms {
            let label = EDGE_LABELS[rng.random_range(0..EDGE_LABELS.len())];
            let term = match rng.random_range(0..3) {
                0 => label.to_string(),
                1 => {
                    let m = rng.random_range(0..=2u32);
                    let n = rng.random_range(m..=m + 2);
                    format!("{label}{{{m},{n}}}")
                }
                _ => format!("{label}{{1,{}}}", rng.random_range(1..=3)),
            };
            seq.push(term);
        }
        pieces.push(seq.join("."));
    }
    pieces.join(" | ")
}

/// Two distinct random node ids from `g`.
pub fn random_pair(rng: &mut ChaCha8Rng, g: &ProbabilisticGraph) -> (NodeId, NodeId) {
    let ids: Vec<NodeId> = g.nodes().map(|(id, _)| id).collect();
    loop {
        let a = rng.random_range(0..ids.len());
        let b = rng.random_range(0..ids.len());
        if a != b {
            return (ids[a], ids[b]);
        }
    }
}

// ---------------------------------------------------------------------------
// Optimizer oracles.

/// Central finite differences of a scalar function.
pub fn central_diff_grad(f: &dyn Fn(&[f64]) -> f64, w: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(w.len());
    for j in 0..w.len() {
        let mut hi = w.to_vec();
        let mut lo = w.to_vec();
        hi[j] += h;
        lo[j] -= h;
        out.push((f(&hi) - f(&lo)) / (2.0 * h));
    }
    out
}

/// The regularized logistic objective, written independently: naive sums,
/// no margin tricks (oracle problems keep margins moderate).
pub fn oracle_objective(xs: &[Vec<f64>], ys: &[f64], c: f64, w: &[f64]) -> f64 {
    let mut loss = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let z: f64 = x.iter().zip(w).map(|(a, b)| a * b).sum();
        loss += (1.0 + (-y * z).exp()).ln();
    }
    w.iter().map(|v| v * v).sum::<f64>() / 2.0 + c * loss
}

/// Independent gradient: `w_j − C Σ_i y_i x_ij / (1 + exp(y_i z_i))`.
pub fn oracle_gradient(xs: &[Vec<f64>], ys: &[f64], c: f64, w: &[f64]) -> Vec<f64> {
    let mut g = w.to_vec();
    for (x, &y) in xs.iter().zip(ys) {
        let z: f64 = x.iter().zip(w).map(|(a, b)| a * b).sum();
        let scale = c * y / (1.0 + (y * z).exp());
        for (gj, &xj) in g.iter_mut().zip(x) {
            *gj -= scale * xj;
        }
    }
    g
}

/// Gradient descent with backtracking line search, run to a tiny gradient
/// norm. The objective is strongly convex, so this converges to the unique
/// minimizer from anywhere.
pub fn gd_minimize(xs: &[Vec<f64>], ys: &[f64], c: f64) -> Vec<f64> {
    let d = xs[0].len();
    let mut w = vec![0.0; d];
    for _ in 0..200_000 {
        let g = oracle_gradient(xs, ys, c, &w);
        let gnorm2: f64 = g.iter().map(|v| v * v).sum();
        if gnorm2.sqrt() <= 1e-10 {
            break;
        }
        let f0 = oracle_objective(xs, ys, c, &w);
        let mut step = 1.0;
        loop {
            let trial: Vec<f64> = w.iter().zip(&g).map(|(wi, gi)| wi - step * gi).collect();
            if oracle_objective(xs, ys, c, &trial) <= f0 - 0.5 * step * gnorm2 {
                w = trial;
                break;
            }
            step *= 0.5;
            assert!(step > 1e-20, "line search failed");
        }
    }
    w
}

// ---------------------------------------------------------------------------
// Synthetic ratings corpora.

/// Ratings with planted group structure: users and items each belong to one
/// of five latent groups and the rating is a fixed function of the two
/// groups, so same-group users agree exactly wherever they co-rate.
pub fn synthetic_ratings(
    seed: u64,
    users: usize,
    items: usize,
    ratings_per_user: usize,
) -> String {
    let mut rng = rng(seed);
    let mut out = String::new();
    for u in 0..users {
        let ug = u % 5;
        let mut rated: Vec<usize> = (0..items).collect();
        rated.shuffle(&mut rng);
        rated.truncate(ratings_per_user.min(items));
        rated.sort_unstable();
        for &i in &rated {
            let ig = i % 5;
            let rating = ((2 * ug + 3 * ig) % 5) + 1;
            out.push_str(&format!("{}\t{}\t{}\n", u + 1, i + 1, rating));
        }
    }
    out
}

/// Planted group structure with label noise: each rating follows the group
/// rule with probability `1 - noise`, otherwise it is uniform on 1..=5.
/// Learnable but not trivially so.
pub fn synthetic_ratings_noisy(
    seed: u64,
    users: usize,
    items: usize,
    ratings_per_user: usize,
    noise: f64,
) -> String {
    let mut rng = rng(seed);
    let mut out = String::new();
    for u in 0..users {
        let ug = u % 5;
        let mut rated: Vec<usize> = (0..items).collect();
        rated.shuffle(&mut rng);
        rated.truncate(ratings_per_user.min(items));
        rated.sort_unstable();
        for &i in &rated {
            let ig = i % 5;
            let rating = if rng.random_bool(noise) {
                rng.random_range(1..=5)
            } else {
                ((2 * ug + 3 * ig) % 5) + 1
            };
            out.push_str(&format!("{}\t{}\t{}\n", u + 1, i + 1, rating));
        }
    }
    out
}

/// A deterministic train/test split of a ratings file's lines: every
/// `holdout`-th line goes to the test set.
pub fn split_ratings(text: &str, holdout: usize) -> (String, String) {
    let mut train = String::new();
    let mut test = String::new();
    for (i, line) in text.lines().enumerate() {
        if (i + 1) % holdout == 0 {
            test.push_str(line);
            test.push('\n');
        } else {
            train.push_str(line);
            train.push('\n');
        }
    }
    (train, test)
}
