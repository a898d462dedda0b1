//! Build a probabilistic graph by hand and poke at its world semantics.
//!
//! A graph here is undirected, with labeled nodes, labeled edges, and an
//! existence probability on every edge. A "world" is one deterministic
//! subgraph drawn by flipping each edge independently; the probability of a
//! world is the product over edges of `p` (kept) or `1 - p` (dropped).
//!
//! Run with: `cargo run --example build_graph`

use probpath::graph::ProbabilisticGraph;

fn main() {
    let mut graph = ProbabilisticGraph::new();

    // Two users, two items. Rating edges are observed facts (probability 1);
    // similarity edges are uncertain.
    graph.add_node("alice", "user").unwrap();
    graph.add_node("bob", "user").unwrap();
    graph.add_node("matrix", "item").unwrap();
    graph.add_node("speed", "item").unwrap();

    graph.add_edge("alice", "matrix", "r5", 1.0).unwrap();
    graph.add_edge("bob", "matrix", "r4", 1.0).unwrap();
    graph.add_edge("bob", "speed", "r2", 1.0).unwrap();
    let sim = graph.add_edge("alice", "bob", "simU", 0.7).unwrap();

    println!(
        "graph: {} nodes, {} edges, {} distinct labels",
        graph.node_count(),
        graph.edge_count(),
        graph.label_count()
    );
    for (_, edge) in graph.edges() {
        let (u, v) = edge.endpoints();
        println!(
            "  {:10} -[{} p={}]- {}",
            graph.node(u).id(),
            graph.label(edge.label()),
            edge.prob(),
            graph.node(v).id()
        );
    }

    // World probabilities multiply independent edge outcomes. The all-edges
    // world keeps the one uncertain edge (0.7); dropping it leaves 0.3.
    let all: Vec<_> = graph.edges().map(|(id, _)| id).collect();
    let without_sim: Vec<_> = all.iter().copied().filter(|&e| e != sim).collect();
    println!();
    println!("P(world with every edge)      = {}", graph.world_probability(&all).unwrap());
    println!("P(world without the sim edge) = {}", graph.world_probability(&without_sim).unwrap());

    // The text encoding round-trips; this is what `probpath build-graph`
    // writes and every other subcommand reads.
    let mut encoded = Vec::new();
    graph.save(&mut encoded).unwrap();
    println!();
    println!("serialized form:");
    print!("{}", String::from_utf8(encoded).unwrap());
}
