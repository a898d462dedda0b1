//! In-memory probabilistic graph: labeled nodes, labeled undirected edges with
//! independent existence probabilities, adjacency indexes, and a line-oriented
//! TSV serialization.
//!
//! A graph is built incrementally through [`ProbabilisticGraph::add_node`] and
//! [`ProbabilisticGraph::add_edge`], then shared immutably (`&ProbabilisticGraph`)
//! with any number of concurrent readers. Labels are interned to small integer
//! ids; adjacency lists are kept sorted by `(label, neighbor)` so traversal can
//! slice out all edges of one label at a node without scanning the rest.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path as FsPath;

use thiserror::Error;

/// Interned label identifier, shared by node and edge labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelId(u16);

impl LabelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Identifier of a node within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Identifier of an edge within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("unknown node id `{0}`")]
    UnknownNode(String),
    #[error("self loop on node `{0}` is not allowed")]
    SelfLoop(String),
    #[error("edge probability {0} out of range (expected 0 < p <= 1)")]
    ProbabilityOutOfRange(f64),
    #[error("duplicate edge ({u}, {v}) with label `{label}`")]
    DuplicateEdge { u: String, v: String, label: String },
    #[error("edge id {0} does not belong to this graph")]
    ForeignEdge(u32),
    #[error("invalid token `{0}`: must be non-empty and contain no whitespace")]
    InvalidToken(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A labeled node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord {
    id: String,
    label: LabelId,
}

impl NodeRecord {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn label(&self) -> LabelId {
        self.label
    }
}

/// An undirected labeled edge with an existence probability in `(0, 1]`.
///
/// Endpoints are stored in canonical order (`a < b`); the pair is unordered.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    a: NodeId,
    b: NodeId,
    label: LabelId,
    prob: f64,
}

impl EdgeRecord {
    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.a, self.b)
    }

    pub fn label(&self) -> LabelId {
        self.label
    }

    pub fn prob(&self) -> f64 {
        self.prob
    }

    /// The endpoint opposite to `n`, or `None` if `n` is not an endpoint.
    pub fn other(&self, n: NodeId) -> Option<NodeId> {
        if n == self.a {
            Some(self.b)
        } else if n == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

/// One adjacency entry: an incident edge seen from one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjEntry {
    pub label: LabelId,
    pub neighbor: NodeId,
    pub edge: EdgeId,
}

/// Undirected probabilistic graph over interned labels.
#[derive(Debug, Clone, Default)]
pub struct ProbabilisticGraph {
    nodes: Vec<NodeRecord>,
    edges: Vec<EdgeRecord>,
    adjacency: Vec<Vec<AdjEntry>>,
    labels: Vec<String>,
    label_index: HashMap<String, LabelId>,
    node_index: HashMap<String, NodeId>,
}

fn check_token(tok: &str) -> Result<(), GraphError> {
    if tok.is_empty() || tok.chars().any(char::is_whitespace) {
        return Err(GraphError::InvalidToken(tok.to_string()));
    }
    Ok(())
}

impl ProbabilisticGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns a label, creating it on first use.
    pub fn intern_label(&mut self, label: &str) -> Result<LabelId, GraphError> {
        check_token(label)?;
        if let Some(&id) = self.label_index.get(label) {
            return Ok(id);
        }
        let id = LabelId(u16::try_from(self.labels.len()).expect("label table overflow"));
        self.labels.push(label.to_string());
        self.label_index.insert(label.to_string(), id);
        Ok(id)
    }

    pub fn add_node(&mut self, id: &str, label: &str) -> Result<NodeId, GraphError> {
        check_token(id)?;
        if self.node_index.contains_key(id) {
            return Err(GraphError::DuplicateNode(id.to_string()));
        }
        let label = self.intern_label(label)?;
        let node = NodeId(u32::try_from(self.nodes.len()).expect("node table overflow"));
        self.nodes.push(NodeRecord { id: id.to_string(), label });
        self.adjacency.push(Vec::new());
        self.node_index.insert(id.to_string(), node);
        Ok(node)
    }

    /// Adds an undirected edge between two existing, distinct nodes.
    ///
    /// At most one edge may exist per `(pair, label)`; an absent relationship
    /// is encoded by absence of the edge, so probability must be in `(0, 1]`.
    pub fn add_edge(&mut self, u: &str, v: &str, label: &str, prob: f64) -> Result<EdgeId, GraphError> {
        let nu = self.node_id(u).ok_or_else(|| GraphError::UnknownNode(u.to_string()))?;
        let nv = self.node_id(v).ok_or_else(|| GraphError::UnknownNode(v.to_string()))?;
        if nu == nv {
            return Err(GraphError::SelfLoop(u.to_string()));
        }
        if !(prob > 0.0 && prob <= 1.0) {
            return Err(GraphError::ProbabilityOutOfRange(prob));
        }
        let label_id = self.intern_label(label)?;
        let (a, b) = if nu < nv { (nu, nv) } else { (nv, nu) };
        if self.edge_between(a, b, label_id).is_some() {
            return Err(GraphError::DuplicateEdge {
                u: u.to_string(),
                v: v.to_string(),
                label: label.to_string(),
            });
        }
        let edge = EdgeId(u32::try_from(self.edges.len()).expect("edge table overflow"));
        self.edges.push(EdgeRecord { a, b, label: label_id, prob });
        for (from, to) in [(a, b), (b, a)] {
            let list = &mut self.adjacency[from.index()];
            let entry = AdjEntry { label: label_id, neighbor: to, edge };
            let pos = list
                .binary_search_by(|e| (e.label, e.neighbor).cmp(&(label_id, to)))
                .unwrap_err();
            list.insert(pos, entry);
        }
        Ok(edge)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn node_id(&self, id: &str) -> Option<NodeId> {
        self.node_index.get(id).copied()
    }

    pub fn node(&self, id: NodeId) -> &NodeRecord {
        &self.nodes[id.index()]
    }

    pub fn edge(&self, id: EdgeId) -> &EdgeRecord {
        &self.edges[id.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &NodeRecord)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i as u32), n))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &EdgeRecord)> {
        self.edges.iter().enumerate().map(|(i, e)| (EdgeId(i as u32), e))
    }

    pub fn label(&self, id: LabelId) -> &str {
        &self.labels[id.index()]
    }

    pub fn label_id(&self, label: &str) -> Option<LabelId> {
        self.label_index.get(label).copied()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// All label ids of this graph, in interning order.
    pub fn label_ids(&self) -> impl Iterator<Item = LabelId> + '_ {
        (0..self.labels.len()).map(|i| LabelId(i as u16))
    }

    /// All incident edges of `n`, sorted by `(label, neighbor)`.
    pub fn adjacency(&self, n: NodeId) -> &[AdjEntry] {
        &self.adjacency[n.index()]
    }

    /// The incident edges of `n` carrying `label`, as a contiguous slice.
    pub fn adjacency_with_label(&self, n: NodeId, label: LabelId) -> &[AdjEntry] {
        let list = &self.adjacency[n.index()];
        let lo = list.partition_point(|e| e.label < label);
        let hi = list.partition_point(|e| e.label <= label);
        &list[lo..hi]
    }

    /// Looks up the unique edge with `label` between `u` and `v`, if present.
    pub fn edge_between(&self, u: NodeId, v: NodeId, label: LabelId) -> Option<EdgeId> {
        let (shorter, other) = if self.adjacency[u.index()].len() <= self.adjacency[v.index()].len() {
            (u, v)
        } else {
            (v, u)
        };
        let list = &self.adjacency[shorter.index()];
        list.binary_search_by(|e| (e.label, e.neighbor).cmp(&(label, other)))
            .ok()
            .map(|i| list[i].edge)
    }

    /// Probability of the possible world containing exactly `subset` of the
    /// graph's edges: the product of `p` over included edges times `1 - p`
    /// over excluded ones. Edges are independent.
    pub fn world_probability(&self, subset: &[EdgeId]) -> Result<f64, GraphError> {
        let mut included = vec![false; self.edges.len()];
        for &e in subset {
            let slot = included
                .get_mut(e.index())
                .ok_or(GraphError::ForeignEdge(e.0))?;
            *slot = true;
        }
        let mut p = 1.0;
        for (edge, inc) in self.edges.iter().zip(&included) {
            p *= if *inc { edge.prob } else { 1.0 - edge.prob };
        }
        Ok(p)
    }

    /// Writes the graph in the TSV exchange format.
    ///
    /// One record per line: `node <id> <label>` or
    /// `edge <src> <dst> <label> <prob>`, tab-separated, `#` for comments.
    /// Probabilities print in shortest round-trip form, so a save/load cycle
    /// preserves them bit-exactly.
    pub fn save<W: Write>(&self, mut w: W) -> Result<(), GraphError> {
        for node in &self.nodes {
            writeln!(w, "node\t{}\t{}", node.id, self.label(node.label))?;
        }
        for edge in &self.edges {
            writeln!(
                w,
                "edge\t{}\t{}\t{}\t{}",
                self.nodes[edge.a.index()].id,
                self.nodes[edge.b.index()].id,
                self.label(edge.label),
                edge.prob
            )?;
        }
        Ok(())
    }

    pub fn save_to_path<P: AsRef<FsPath>>(&self, path: P) -> Result<(), GraphError> {
        let file = File::create(path)?;
        let mut w = BufWriter::new(file);
        self.save(&mut w)?;
        w.flush()?;
        Ok(())
    }

    /// Parses a graph from the TSV exchange format. Malformed lines are
    /// reported with their 1-based line number.
    pub fn load<R: BufRead>(r: R) -> Result<Self, GraphError> {
        let mut graph = Self::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let fail = |message: String| GraphError::Parse { line: lineno, message };
            match fields[0] {
                "node" => {
                    if fields.len() != 3 {
                        return Err(fail(format!("expected `node <id> <label>`, got {} fields", fields.len())));
                    }
                    graph
                        .add_node(fields[1], fields[2])
                        .map_err(|e| fail(e.to_string()))?;
                }
                "edge" => {
                    if fields.len() != 5 {
                        return Err(fail(format!(
                            "expected `edge <src> <dst> <label> <prob>`, got {} fields",
                            fields.len()
                        )));
                    }
                    let prob: f64 = fields[4]
                        .parse()
                        .map_err(|_| fail(format!("bad probability `{}`", fields[4])))?;
                    graph
                        .add_edge(fields[1], fields[2], fields[3], prob)
                        .map_err(|e| fail(e.to_string()))?;
                }
                other => return Err(fail(format!("unknown record kind `{other}`"))),
            }
        }
        Ok(graph)
    }

    pub fn load_from_path<P: AsRef<FsPath>>(path: P) -> Result<Self, GraphError> {
        let file = File::open(path)?;
        Self::load(BufReader::new(file))
    }
}

/// A simple path: a walk whose nodes are all distinct.
///
/// The edge sequence alone does not determine a direction for a single edge,
/// so a path carries its source node; the node sequence is derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    source: NodeId,
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
}

impl Path {
    /// Validates that `edges` forms a walk from `source` with distinct nodes.
    pub fn new(graph: &ProbabilisticGraph, source: NodeId, edges: Vec<EdgeId>) -> Result<Self, PathError> {
        if edges.is_empty() {
            return Err(PathError::Empty);
        }
        let mut nodes = vec![source];
        let mut current = source;
        for &e in &edges {
            let record = graph
                .edges
                .get(e.index())
                .ok_or(PathError::ForeignEdge(e.0))?;
            let next = record.other(current).ok_or(PathError::BrokenWalk)?;
            if nodes.contains(&next) {
                return Err(PathError::RevisitedNode);
            }
            nodes.push(next);
            current = next;
        }
        Ok(Self { source, nodes, edges })
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().expect("path is never empty")
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The concatenated edge labels along the path.
    pub fn label_ids<'g>(&self, graph: &'g ProbabilisticGraph) -> Vec<LabelId> {
        self.edges.iter().map(|e| graph.edge(*e).label()).collect()
    }

    pub fn label_string(&self, graph: &ProbabilisticGraph) -> String {
        let labels: Vec<&str> = self
            .edges
            .iter()
            .map(|e| graph.label(graph.edge(*e).label()))
            .collect();
        labels.join(".")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("a path must contain at least one edge")]
    Empty,
    #[error("edge id {0} does not belong to this graph")]
    ForeignEdge(u32),
    #[error("consecutive edges do not share a node")]
    BrokenWalk,
    #[error("path revisits a node")]
    RevisitedNode,
}

impl fmt::Display for ProbabilisticGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "graph({} nodes, {} edges, {} labels)",
            self.node_count(),
            self.edge_count(),
            self.label_count()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> ProbabilisticGraph {
        let mut g = ProbabilisticGraph::new();
        g.add_node("u1", "user").unwrap();
        g.add_node("u2", "user").unwrap();
        g.add_node("i1", "item").unwrap();
        g
    }

    #[test]
    fn add_node_and_lookup() {
        let mut g = ProbabilisticGraph::new();
        let n = g.add_node("u1", "user").unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.node_id("u1"), Some(n));
        assert_eq!(g.node(n).id(), "u1");
    }

    #[test]
    fn duplicate_node_rejected() {
        let mut g = ProbabilisticGraph::new();
        g.add_node("u1", "user").unwrap();
        assert!(matches!(g.add_node("u1", "user"), Err(GraphError::DuplicateNode(_))));
    }

    #[test]
    fn many_nodes_retrievable() {
        let mut g = ProbabilisticGraph::new();
        for i in 0..1000 {
            g.add_node(&format!("n{i}"), "user").unwrap();
        }
        assert_eq!(g.node_count(), 1000);
        for i in 0..1000 {
            assert!(g.node_id(&format!("n{i}")).is_some());
        }
    }

    #[test]
    fn rating_edge_with_probability_one() {
        let mut g = toy();
        let e = g.add_edge("u1", "i1", "r3", 1.0).unwrap();
        assert_eq!(g.edge(e).prob(), 1.0);
        let u1 = g.node_id("u1").unwrap();
        let i1 = g.node_id("i1").unwrap();
        assert_eq!(g.adjacency(u1).len(), 1);
        assert_eq!(g.adjacency(i1).len(), 1);
        assert_eq!(g.adjacency(u1)[0].neighbor, i1);
    }

    #[test]
    fn self_loop_rejected() {
        let mut g = toy();
        assert!(matches!(g.add_edge("u1", "u1", "simU", 0.5), Err(GraphError::SelfLoop(_))));
    }

    #[test]
    fn out_of_range_probability_rejected() {
        let mut g = toy();
        for bad in [1.3, 0.0, -0.1, f64::NAN] {
            assert!(matches!(
                g.add_edge("u1", "u2", "simU", bad),
                Err(GraphError::ProbabilityOutOfRange(_))
            ));
        }
    }

    #[test]
    fn duplicate_pair_label_rejected_but_parallel_labels_allowed() {
        let mut g = toy();
        g.add_edge("u1", "u2", "simU", 0.5).unwrap();
        assert!(matches!(
            g.add_edge("u2", "u1", "simU", 0.7),
            Err(GraphError::DuplicateEdge { .. })
        ));
        g.add_edge("u1", "u2", "other", 0.7).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn unknown_endpoint_rejected() {
        let mut g = toy();
        assert!(matches!(g.add_edge("u1", "zzz", "simU", 0.5), Err(GraphError::UnknownNode(_))));
    }

    #[test]
    fn world_probability_products() {
        let mut g = toy();
        let e1 = g.add_edge("u1", "u2", "simU", 0.5).unwrap();
        assert_eq!(g.world_probability(&[e1]).unwrap(), 0.5);
        let _e2 = g.add_edge("u1", "i1", "r1", 0.2).unwrap();
        assert!((g.world_probability(&[e1]).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn world_probability_full_subset() {
        let mut g = ProbabilisticGraph::new();
        for i in 0..4 {
            g.add_node(&format!("n{i}"), "x").unwrap();
        }
        let edges = vec![
            g.add_edge("n0", "n1", "a", 0.3).unwrap(),
            g.add_edge("n1", "n2", "a", 0.3).unwrap(),
            g.add_edge("n2", "n3", "a", 0.3).unwrap(),
        ];
        assert!((g.world_probability(&edges).unwrap() - 0.027).abs() < 1e-15);
    }

    #[test]
    fn world_probability_rejects_foreign_edge() {
        let g = toy();
        assert!(matches!(
            g.world_probability(&[EdgeId(7)]),
            Err(GraphError::ForeignEdge(7))
        ));
    }

    #[test]
    fn world_probabilities_sum_to_one() {
        let mut g = ProbabilisticGraph::new();
        for i in 0..5 {
            g.add_node(&format!("n{i}"), "x").unwrap();
        }
        let mut edges = Vec::new();
        let probs = [0.1, 0.25, 0.5, 0.75, 0.9, 1.0];
        let pairs = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 2), (1, 3)];
        for (k, (i, j)) in pairs.iter().enumerate() {
            edges.push(g.add_edge(&format!("n{i}"), &format!("n{j}"), "a", probs[k]).unwrap());
        }
        let m = edges.len();
        let mut total = 0.0;
        for mask in 0u32..(1 << m) {
            let subset: Vec<EdgeId> = (0..m).filter(|b| mask >> b & 1 == 1).map(|b| edges[b]).collect();
            total += g.world_probability(&subset).unwrap();
        }
        assert!((total - 1.0).abs() < 1e-12, "sum over worlds was {total}");
    }

    #[test]
    fn adjacency_symmetry() {
        let mut g = toy();
        let e = g.add_edge("u1", "u2", "simU", 0.4).unwrap();
        let u1 = g.node_id("u1").unwrap();
        let u2 = g.node_id("u2").unwrap();
        assert!(g.adjacency(u1).iter().any(|a| a.edge == e && a.neighbor == u2));
        assert!(g.adjacency(u2).iter().any(|a| a.edge == e && a.neighbor == u1));
    }

    #[test]
    fn label_slices() {
        let mut g = toy();
        g.add_node("i2", "item").unwrap();
        g.add_edge("u1", "u2", "simU", 0.4).unwrap();
        g.add_edge("u1", "i1", "r3", 1.0).unwrap();
        g.add_edge("u1", "i2", "r3", 1.0).unwrap();
        let u1 = g.node_id("u1").unwrap();
        let r3 = g.label_id("r3").unwrap();
        let simu = g.label_id("simU").unwrap();
        assert_eq!(g.adjacency_with_label(u1, r3).len(), 2);
        assert_eq!(g.adjacency_with_label(u1, simu).len(), 1);
        assert!(g.adjacency_with_label(u1, r3).iter().all(|e| e.label == r3));
    }

    #[test]
    fn roundtrip_preserves_everything() {
        let mut g = toy();
        g.add_edge("u1", "u2", "simU", 0.123456789012345678).unwrap();
        g.add_edge("u1", "i1", "r5", 1.0).unwrap();
        let mut buf = Vec::new();
        g.save(&mut buf).unwrap();
        let g2 = ProbabilisticGraph::load(buf.as_slice()).unwrap();
        assert_eq!(g2.node_count(), g.node_count());
        assert_eq!(g2.edge_count(), g.edge_count());
        for (_, e) in g.edges() {
            let (a, b) = e.endpoints();
            let id = g2
                .edge_between(
                    g2.node_id(g.node(a).id()).unwrap(),
                    g2.node_id(g.node(b).id()).unwrap(),
                    g2.label_id(g.label(e.label())).unwrap(),
                )
                .unwrap();
            assert_eq!(g2.edge(id).prob().to_bits(), e.prob().to_bits());
        }
    }

    #[test]
    fn load_reports_line_numbers() {
        let text = "node\tu1\tuser\nnode\ti1\titem\nedge\tu1\ti1\tr3\t1.5\n";
        match ProbabilisticGraph::load(text.as_bytes()) {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_empty_graph() {
        let g = ProbabilisticGraph::load("".as_bytes()).unwrap();
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn comments_and_blanks_skipped() {
        let text = "# a comment\n\nnode\tu1\tuser\n";
        let g = ProbabilisticGraph::load(text.as_bytes()).unwrap();
        assert_eq!(g.node_count(), 1);
    }

    #[test]
    fn path_validation() {
        let mut g = ProbabilisticGraph::new();
        for i in 0..4 {
            g.add_node(&format!("n{i}"), "x").unwrap();
        }
        let e01 = g.add_edge("n0", "n1", "a", 0.5).unwrap();
        let e12 = g.add_edge("n1", "n2", "b", 0.5).unwrap();
        let e20 = g.add_edge("n2", "n0", "c", 0.5).unwrap();
        let n0 = g.node_id("n0").unwrap();
        let p = Path::new(&g, n0, vec![e01, e12]).unwrap();
        assert_eq!(p.label_string(&g), "a.b");
        assert_eq!(p.target(), g.node_id("n2").unwrap());
        assert_eq!(Path::new(&g, n0, vec![e01, e20]), Err(PathError::BrokenWalk));
        assert_eq!(Path::new(&g, n0, vec![e01, e12, e20]), Err(PathError::RevisitedNode));
        assert_eq!(Path::new(&g, n0, vec![]), Err(PathError::Empty));
    }
}
