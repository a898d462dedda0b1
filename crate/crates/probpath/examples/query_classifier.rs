//! Classify a rating with a single pattern family and argmax.
//!
//! The simplest classifier needs no training at all: expand one family per
//! rating class, estimate each class's path probability for the pair, and
//! answer with the class whose estimate is largest. Exact ties go to the
//! smaller class; if every class has probability zero the classifier
//! abstains rather than guessing.
//!
//! Run with: `cargo run --example query_classifier`

use probpath::features::{classify_by_query, QueryOutcome, DEFAULT_CLASSES};
use probpath::graph::ProbabilisticGraph;

fn main() {
    // v is strongly similar to u and rated the item r4; w is weakly similar
    // and rated it r2. The class-4 path should dominate.
    let mut graph = ProbabilisticGraph::new();
    graph.add_node("u", "user").unwrap();
    graph.add_node("v", "user").unwrap();
    graph.add_node("w", "user").unwrap();
    graph.add_node("i", "item").unwrap();
    graph.add_edge("u", "v", "simU", 0.9).unwrap();
    graph.add_edge("u", "w", "simU", 0.2).unwrap();
    graph.add_edge("v", "i", "r4", 1.0).unwrap();
    graph.add_edge("w", "i", "r2", 1.0).unwrap();

    let outcome =
        classify_by_query(&graph, "u", "i", "simU.r?", &DEFAULT_CLASSES, 10_000, 42).unwrap();
    match outcome {
        QueryOutcome::Class(class) => println!("family simU.r? predicts class {class} for (u, i)"),
        QueryOutcome::Abstain => println!("family simU.r? abstains for (u, i)"),
    }

    // No path of any class reaches a disconnected node: the classifier
    // must say so instead of inventing an answer.
    graph.add_node("island", "item").unwrap();
    let outcome =
        classify_by_query(&graph, "u", "island", "simU.r?", &DEFAULT_CLASSES, 10_000, 42).unwrap();
    println!("for the disconnected pair (u, island): {outcome:?}");

    // The repeat bound widens the reach: u - v - i only needs one hop, but
    // a chain u - v - x - j needs two user hops before the rating.
    let mut chain = ProbabilisticGraph::new();
    for (id, label) in [("u", "user"), ("v", "user"), ("x", "user"), ("j", "item")] {
        chain.add_node(id, label).unwrap();
    }
    chain.add_edge("u", "v", "simU", 0.8).unwrap();
    chain.add_edge("v", "x", "simU", 0.8).unwrap();
    chain.add_edge("x", "j", "r1", 1.0).unwrap();
    for family in ["simU.r?", "simU{1,2}.r?"] {
        let outcome = classify_by_query(&chain, "u", "j", family, &DEFAULT_CLASSES, 10_000, 42).unwrap();
        println!("family {family:13} on the two-hop chain: {outcome:?}");
    }
}
