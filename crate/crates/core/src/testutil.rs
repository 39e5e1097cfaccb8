//! Shared fixtures for unit, integration, and acceptance tests: the worked
//! five-node/four-node example pair and a seeded random graph generator.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Alphabets, EdgeSpec, LabeledGraph};

/// The worked example pair: G is a star-like graph on 5 nodes (center node 0,
/// labels A,B,B,A,A) with 4 edges; H is a 4-cycle with a chord (labels
/// B,A,B,B, 5 edges). Unit-cost GED is 5: delete one leaf and its edge,
/// relabel one A leaf to B, insert two edges.
pub fn fig2_pair() -> (LabeledGraph, LabeledGraph) {
    let mut alph = Alphabets::new();
    let a = alph.intern_node("A");
    let b = alph.intern_node("B");
    let e = alph.intern_edge("e");
    let alph = Arc::new(alph);
    // G: center 0 (A), top 1 (B), right 2 (B), bottom 3 (A), left 4 (A)
    let g = LabeledGraph::build(
        Arc::clone(&alph),
        vec![a, b, b, a, a],
        vec![
            EdgeSpec::new(0, 1, e),
            EdgeSpec::new(0, 2, e),
            EdgeSpec::new(0, 3, e),
            EdgeSpec::new(0, 4, e),
        ],
    )
    .unwrap();
    // H: top 0 (B), left 1 (A), right 2 (B), bottom 3 (B); square + chord 1-2
    let h = LabeledGraph::build(
        Arc::clone(&alph),
        vec![b, a, b, b],
        vec![
            EdgeSpec::new(0, 1, e),
            EdgeSpec::new(0, 2, e),
            EdgeSpec::new(1, 2, e),
            EdgeSpec::new(1, 3, e),
            EdgeSpec::new(2, 3, e),
        ],
    )
    .unwrap();
    (g, h)
}

/// Parameters for [`random_graph`].
#[derive(Debug, Clone, Copy)]
pub struct RandomGraphSpec {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub node_labels: usize,
    pub edge_labels: usize,
}

impl Default for RandomGraphSpec {
    fn default() -> Self {
        Self { max_nodes: 6, max_edges: 10, node_labels: 3, edge_labels: 2 }
    }
}

/// Shared alphabet for random graphs: node tokens `n0..`, edge tokens `e0..`.
pub fn random_alphabets(spec: &RandomGraphSpec) -> Arc<Alphabets> {
    let node_tokens: Vec<String> = (0..spec.node_labels).map(|i| format!("n{i}")).collect();
    let edge_tokens: Vec<String> = (0..spec.edge_labels).map(|i| format!("e{i}")).collect();
    Arc::new(Alphabets::from_tokens(&node_tokens, &edge_tokens))
}

/// Generates a random simple labeled graph with 1..=max_nodes nodes.
pub fn random_graph(
    rng: &mut ChaCha8Rng,
    alph: &Arc<Alphabets>,
    spec: &RandomGraphSpec,
) -> LabeledGraph {
    let n = rng.gen_range(1..=spec.max_nodes);
    let labels = (0..n)
        .map(|_| alph.node_label(&format!("n{}", rng.gen_range(0..spec.node_labels))).unwrap())
        .collect();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            pairs.push((u, v));
        }
    }
    // shuffle and take a random prefix
    for i in (1..pairs.len()).rev() {
        let j = rng.gen_range(0..=i);
        pairs.swap(i, j);
    }
    let m = rng.gen_range(0..=pairs.len().min(spec.max_edges));
    let edges = pairs[..m]
        .iter()
        .map(|&(u, v)| {
            let l = alph.edge_label(&format!("e{}", rng.gen_range(0..spec.edge_labels))).unwrap();
            EdgeSpec::new(u, v, l)
        })
        .collect();
    LabeledGraph::build(Arc::clone(alph), labels, edges).unwrap()
}

/// Deterministic RNG for tests.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
