//! Small graphs with known answers, shared by `verify`, the config loader
//! and the tests.

use ocim_core::{Graph, ProbVector};

use crate::edge_list::EdgeList;

/// Names accepted by `graph.fixture` in a config file.
pub const NAMES: &[&str] = &["crossing", "bipartite"];

pub fn by_name(name: &str) -> Option<EdgeList> {
    match name {
        "crossing" => Some(crossing(0.5, 0.4)),
        "bipartite" => Some(bipartite()),
        _ => None,
    }
}

/// `a -> x -> v <- b` with `a -> x` certain. With A seeded at `a` and B at
/// `b`, B reaches `v` one step before A can, so the A-spread is
/// `2 + mu1 (1 - mu2)` under either tie rule and falls as `mu2` rises.
pub fn crossing(mu1: f64, mu2: f64) -> EdgeList {
    let graph = Graph::from_pairs(4, &[(0, 1), (1, 2), (3, 2)]).expect("static fixture");
    EdgeList {
        graph,
        labels: ["a", "x", "v", "b"].map(String::from).to_vec(),
        probs: Some(ProbVector::new(vec![1.0, mu1, mu2]).expect("caller passes probabilities")),
    }
}

/// Six sources over twelve sinks with overlapping neighbourhoods, weighted
/// cascade probabilities. Nodes `l0..l5` are ids 0..5, `r0..r11` are 6..17.
pub fn bipartite() -> EdgeList {
    const ADJ: [&[u32]; 6] = [
        &[0, 1, 2, 3],
        &[3, 4, 5],
        &[5, 6, 7],
        &[0, 8],
        &[8, 9, 10],
        &[10, 11],
    ];
    let pairs: Vec<(u32, u32)> = ADJ
        .iter()
        .enumerate()
        .flat_map(|(l, rs)| rs.iter().map(move |&r| (l as u32, 6 + r)))
        .collect();
    let graph = Graph::from_pairs(18, &pairs).expect("static fixture");
    let probs = ProbVector::weighted_cascade(&graph);
    let labels = (0..6)
        .map(|i| format!("l{i}"))
        .chain((0..12).map(|i| format!("r{i}")))
        .collect();
    EdgeList {
        graph,
        labels,
        probs: Some(probs),
    }
}
