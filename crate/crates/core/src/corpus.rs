//! Random generation of valid closed colored graphs, for property sweeps
//! and the acceptance corpus.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{ColoredGraph, Edge};

/// Draw a uniform random valid closed `(D+1)`-colored graph with `2p`
/// vertices: one random bijection `V -> V-bar` per color, resampled until
/// the result is connected.
pub fn random_closed_graph<R: Rng>(dimension: usize, half_order: usize, rng: &mut R) -> ColoredGraph {
    assert!(half_order >= 1);
    loop {
        let mut edges = Vec::with_capacity((dimension + 1) * half_order);
        for color in 0..=dimension {
            let mut targets: Vec<usize> = (0..half_order).collect();
            targets.shuffle(rng);
            for (p, &n) in targets.iter().enumerate() {
                edges.push(Edge::new(p, n, color));
            }
        }
        let g = ColoredGraph::closed(dimension, half_order, edges);
        if g.is_valid() {
            return g;
        }
    }
}

/// A random valid open graph: a random closed graph with one random edge
/// cut.
pub fn random_cut_graph<R: Rng>(dimension: usize, half_order: usize, rng: &mut R) -> ColoredGraph {
    let g = random_closed_graph(dimension, half_order, rng);
    let cut = rng.gen_range(0..g.edges().len());
    g.with_cuts([cut])
}
