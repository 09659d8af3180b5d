//! d-bubbles, the dual abstract simplicial complex and the pseudomanifold
//! conditions.
//!
//! A d-bubble is a maximal connected subgraph using exactly the edges of a
//! fixed d-element color set. The D-bubbles assemble into the vertex set of
//! a D-dimensional complex dual to the graph: every `(D+1-d)`-bubble
//! indexes a `(d-1)`-simplex whose members are the D-bubbles containing it.
//! Distinct simplices may share a member set (a Delta-complex, not a plain
//! simplicial complex), so the face relation is carried explicitly.

use std::collections::BTreeMap;

use crate::combinatorics::combinations;
use crate::graph::{Color, ColoredGraph};

/// A maximal connected fixed-color-set subgraph, holding references into
/// its parent graph (vertex rows per [`ColoredGraph::row`], edge indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bubble {
    /// Sorted color set (the species).
    pub colors: Vec<Color>,
    /// Component number within the species; components are numbered in
    /// order of their smallest contained vertex row.
    pub component: usize,
    /// Sorted vertex rows of the parent graph.
    pub vertex_rows: Vec<usize>,
    /// Sorted edge indices of the parent graph.
    pub edge_indices: Vec<usize>,
}

impl Bubble {
    pub fn contains_row(&self, row: usize) -> bool {
        self.vertex_rows.binary_search(&row).is_ok()
    }
}

/// All bubbles of the given color set. Their vertex sets partition the
/// vertices of the graph; their edge sets partition the edges with those
/// colors. On open graphs only internal (non-cut) edges participate.
pub fn enumerate_bubbles(graph: &ColoredGraph, colors: &[Color]) -> Vec<Bubble> {
    let mut in_set = vec![false; graph.dimension() + 1];
    for &c in colors {
        in_set[c] = true;
    }
    let n = graph.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for (i, e) in graph.edges().iter().enumerate() {
        if !in_set[e.color] || graph.is_cut(i) {
            continue;
        }
        let a = find(&mut parent, e.positive);
        let b = find(&mut parent, graph.positive_count() + e.negative);
        if a != b {
            parent[a] = b;
        }
    }
    let mut by_root: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for row in 0..n {
        let root = find(&mut parent, row);
        by_root.entry(root).or_default().0.push(row);
    }
    for (i, e) in graph.edges().iter().enumerate() {
        if !in_set[e.color] || graph.is_cut(i) {
            continue;
        }
        let root = find(&mut parent, e.positive);
        by_root.get_mut(&root).unwrap().1.push(i);
    }
    // Components keyed by their smallest vertex row.
    let mut comps: Vec<(Vec<usize>, Vec<usize>)> = by_root.into_values().collect();
    comps.sort_by_key(|(rows, _)| rows[0]);
    comps
        .into_iter()
        .enumerate()
        .map(|(component, (vertex_rows, mut edge_indices))| {
            edge_indices.sort_unstable();
            Bubble {
                colors: colors.to_vec(),
                component,
                vertex_rows,
                edge_indices,
            }
        })
        .collect()
}

/// Bubble counts per cardinality d, summed over species.
pub fn bubble_counts(graph: &ColoredGraph) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for d in 0..=graph.dimension() {
        let mut total = 0;
        for colors in combinations(graph.dimension() + 1, d) {
            total += enumerate_bubbles(graph, &colors).len();
        }
        counts.insert(d, total);
    }
    counts
}

/// Extract a bubble as a standalone closed colored graph: colors renumbered
/// to `0..|colors|` by rank, vertices reindexed densely preserving sign and
/// relative order.
pub fn extract(graph: &ColoredGraph, bubble: &Bubble) -> ColoredGraph {
    let color_rank = |c: Color| bubble.colors.binary_search(&c).expect("bubble color");
    let mut pos_map = BTreeMap::new();
    let mut neg_map = BTreeMap::new();
    for &row in &bubble.vertex_rows {
        if row < graph.positive_count() {
            let next = pos_map.len();
            pos_map.insert(row, next);
        } else {
            let next = neg_map.len();
            neg_map.insert(row - graph.positive_count(), next);
        }
    }
    let edges: Vec<crate::graph::Edge> = bubble
        .edge_indices
        .iter()
        .map(|&i| {
            let e = &graph.edges()[i];
            crate::graph::Edge::new(pos_map[&e.positive], neg_map[&e.negative], color_rank(e.color))
        })
        .collect();
    let dim = bubble.colors.len().saturating_sub(1);
    ColoredGraph::closed(dim, pos_map.len(), edges)
}

/// Count of D-bubbles only (all species). The quantity `B^[D]` of the
/// degree and routing identities.
pub fn top_bubble_count(graph: &ColoredGraph) -> usize {
    let d = graph.dimension();
    (0..=d)
        .map(|i| {
            let colors: Vec<Color> = (0..=d).filter(|&c| c != i).collect();
            enumerate_bubbles(graph, &colors).len()
        })
        .sum()
}

/// A simplex of the dual complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplex {
    /// Ground indices of the D-bubbles containing the indexing bubble,
    /// sorted. Cardinality d means dimension d-1.
    pub members: Vec<usize>,
    /// Color set of the indexing `(D+1-d)`-bubble.
    pub indexing_colors: Vec<Color>,
    /// Component id of the indexing bubble within its species.
    pub indexing_component: usize,
    /// Codimension-1 faces, as indices into the simplex list. A simplex of
    /// cardinality d has exactly d such faces in a complete complex.
    pub faces: Vec<usize>,
}

/// The finite complex dual to a closed graph. Because distinct simplices
/// may carry identical member sets, the face relation is stored explicitly
/// in [`Simplex::faces`] rather than recovered from member inclusion.
#[derive(Debug, Clone)]
pub struct DualComplex {
    pub dimension: usize,
    /// Ground set: all D-bubbles, species `i-hat` for i ascending, then by
    /// component.
    pub ground: Vec<Bubble>,
    pub simplices: Vec<Simplex>,
}

impl DualComplex {
    pub fn facet_indices(&self) -> Vec<usize> {
        let top = self.dimension + 1;
        self.simplices
            .iter()
            .enumerate()
            .filter(|(_, s)| s.members.len() == top)
            .map(|(i, _)| i)
            .collect()
    }

    /// Simplex counts by dimension (cardinality - 1).
    pub fn counts_by_dimension(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for s in &self.simplices {
            *counts.entry(s.members.len() - 1).or_insert(0) += 1;
        }
        counts
    }
}

/// Assemble the dual complex of a valid closed graph.
pub fn dual_complex(graph: &ColoredGraph) -> DualComplex {
    let dim = graph.dimension();
    // Ground set and a per-species row -> ground index map.
    let mut ground = Vec::new();
    let mut species_of_row: Vec<Vec<usize>> = vec![vec![usize::MAX; graph.vertex_count()]; dim + 1];
    for i in 0..=dim {
        let colors: Vec<Color> = (0..=dim).filter(|&c| c != i).collect();
        for b in enumerate_bubbles(graph, &colors) {
            let idx = ground.len();
            for &row in &b.vertex_rows {
                species_of_row[i][row] = idx;
            }
            ground.push(b);
        }
    }

    // One pass per color set: record each bubble's simplex together with a
    // row -> simplex map so face links can be resolved afterwards.
    let mut simplices: Vec<Simplex> = Vec::new();
    let mut bubble_rows: Vec<Vec<usize>> = Vec::new();
    let mut simplex_of_row: BTreeMap<Vec<Color>, Vec<usize>> = BTreeMap::new();
    for k in 0..=dim {
        for colors in combinations(dim + 1, k) {
            let mut missing: Vec<Color> = (0..=dim).collect();
            missing.retain(|c| !colors.contains(c));
            let mut row_map = vec![usize::MAX; graph.vertex_count()];
            for b in enumerate_bubbles(graph, &colors) {
                let idx = simplices.len();
                let row = b.vertex_rows[0];
                let mut members: Vec<usize> =
                    missing.iter().map(|&i| species_of_row[i][row]).collect();
                members.sort_unstable();
                for &r in &b.vertex_rows {
                    row_map[r] = idx;
                }
                simplices.push(Simplex {
                    members,
                    indexing_colors: colors.clone(),
                    indexing_component: b.component,
                    faces: Vec::new(),
                });
                bubble_rows.push(b.vertex_rows);
            }
            simplex_of_row.insert(colors, row_map);
        }
    }

    // The codim-1 faces of the simplex of a k-color bubble B are the
    // simplices of the (k+1)-color bubbles containing B: for each extra
    // color, the component through any of B's rows.
    for idx in 0..simplices.len() {
        let colors = simplices[idx].indexing_colors.clone();
        if colors.len() == dim {
            // Its faces would be indexed by the full color set, whose sole
            // bubble is the whole graph; the complex stops at dimension 0.
            continue;
        }
        let row = bubble_rows[idx][0];
        let mut faces = Vec::new();
        for c in 0..=dim {
            if colors.contains(&c) {
                continue;
            }
            let mut larger = colors.clone();
            larger.push(c);
            larger.sort_unstable();
            faces.push(simplex_of_row[&larger][row]);
        }
        simplices[idx].faces = faces;
    }

    DualComplex { dimension: dim, ground, simplices }
}

/// Pseudomanifold checks with failure witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudomanifoldReport {
    pub pure: bool,
    pub non_branching: bool,
    pub strongly_connected: bool,
    /// Human-readable witnesses for any failed condition.
    pub witnesses: Vec<String>,
}

impl PseudomanifoldReport {
    pub fn all_hold(&self) -> bool {
        self.pure && self.non_branching && self.strongly_connected
    }
}

/// Check that a complex is pure of dimension D, non-branching and strongly
/// connected, using the explicit face relation.
pub fn check_pseudomanifold(complex: &DualComplex) -> PseudomanifoldReport {
    let top = complex.dimension + 1;
    let facets = complex.facet_indices();
    let mut witnesses = Vec::new();

    // Pure: every simplex below the top dimension is a face of something
    // one dimension up; by induction every simplex then lies in a facet.
    let mut parent_count = vec![0usize; complex.simplices.len()];
    for s in &complex.simplices {
        for &f in &s.faces {
            parent_count[f] += 1;
        }
    }
    let mut pure = true;
    for (i, s) in complex.simplices.iter().enumerate() {
        if s.members.len() < top && parent_count[i] == 0 {
            pure = false;
            witnesses.push(format!(
                "simplex {i} (cardinality {}, colors {:?}) lies in no larger simplex",
                s.members.len(),
                s.indexing_colors
            ));
        }
    }

    // Non-branching: every codim-1 simplex that occurs as a face of a
    // facet does so for at most 2 facets.
    let mut ridge_facets: BTreeMap<usize, usize> = BTreeMap::new();
    for &f in &facets {
        for &r in &complex.simplices[f].faces {
            *ridge_facets.entry(r).or_insert(0) += 1;
        }
    }
    let mut non_branching = true;
    for (&ridge, &count) in &ridge_facets {
        if count > 2 {
            non_branching = false;
            witnesses.push(format!(
                "ridge simplex {ridge} (members {:?}) lies in {count} facets",
                complex.simplices[ridge].members
            ));
        }
    }

    // Strongly connected: facets sharing a ridge form one class.
    let mut strongly_connected = true;
    if !facets.is_empty() {
        let mut by_ridge: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (pos, &f) in facets.iter().enumerate() {
            for &r in &complex.simplices[f].faces {
                by_ridge.entry(r).or_default().push(pos);
            }
        }
        let mut adj = vec![Vec::new(); facets.len()];
        for group in by_ridge.values() {
            for a in 0..group.len() {
                for b in (a + 1)..group.len() {
                    adj[group[a]].push(group[b]);
                    adj[group[b]].push(group[a]);
                }
            }
        }
        let mut seen = vec![false; facets.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != facets.len() {
            strongly_connected = false;
            witnesses.push(format!(
                "facet adjacency graph has {reached} of {} facets in one class",
                facets.len()
            ));
        }
    }

    PseudomanifoldReport { pure, non_branching, strongly_connected, witnesses }
}

/// Structured-text export of a complex: facet list plus ridge adjacency,
/// for cross-checking with external topology tools.
pub fn export_complex(complex: &DualComplex) -> String {
    let mut out = String::new();
    out.push_str(&format!("dimension {}\n", complex.dimension));
    out.push_str(&format!("ground {}\n", complex.ground.len()));
    let facets = complex.facet_indices();
    for &f in &facets {
        let members: Vec<String> = complex.simplices[f]
            .members
            .iter()
            .map(|m| m.to_string())
            .collect();
        out.push_str(&format!("facet {}\n", members.join(" ")));
    }
    for a in 0..facets.len() {
        for b in (a + 1)..facets.len() {
            let shares_ridge = complex.simplices[facets[a]]
                .faces
                .iter()
                .any(|r| complex.simplices[facets[b]].faces.contains(r));
            if shares_ridge {
                out.push_str(&format!("adjacent {a} {b}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::random_closed_graph;
    use crate::graph::Edge;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn supermelon_bubble_counts() {
        let g = ColoredGraph::supermelon(3);
        let counts = bubble_counts(&g);
        assert_eq!(counts[&0], 2);
        assert_eq!(counts[&1], 4);
        assert_eq!(counts[&2], 6);
        assert_eq!(counts[&3], 4);
    }

    #[test]
    fn empty_color_set_gives_vertices() {
        let g = ColoredGraph::supermelon(3);
        let bubbles = enumerate_bubbles(&g, &[]);
        assert_eq!(bubbles.len(), 2);
        assert!(bubbles.iter().all(|b| b.vertex_rows.len() == 1));
    }

    #[test]
    fn supermelon_pair_bubbles() {
        let g = ColoredGraph::supermelon(3);
        for i in 0..=3usize {
            for j in (i + 1)..=3 {
                let bubbles = enumerate_bubbles(&g, &[i, j]);
                assert_eq!(bubbles.len(), 1);
                assert_eq!(bubbles[0].vertex_rows.len(), 2);
                assert_eq!(bubbles[0].edge_indices.len(), 2);
            }
        }
    }

    #[test]
    fn necklace_three_bubbles() {
        // Four melon pairs on a color-0 necklace: species 123 has four
        // components.
        let mut edges = Vec::new();
        for k in 0..4 {
            for c in 1..=3 {
                edges.push(Edge::new(k, k, c));
            }
            edges.push(Edge::new(k, (k + 1) % 4, 0));
        }
        let g = ColoredGraph::closed(3, 4, edges);
        assert_eq!(enumerate_bubbles(&g, &[1, 2, 3]).len(), 4);
        assert_eq!(enumerate_bubbles(&g, &[0, 2, 3]).len(), 1);
    }

    #[test]
    fn supermelon_dual_complex_is_double_tetrahedron() {
        let g = ColoredGraph::supermelon(3);
        let complex = dual_complex(&g);
        assert_eq!(complex.ground.len(), 4);
        let counts = complex.counts_by_dimension();
        assert_eq!(counts[&0], 4);
        assert_eq!(counts[&1], 6);
        assert_eq!(counts[&2], 4);
        assert_eq!(counts[&3], 2);
        // The two facets share every ridge: a sphere built from two
        // tetrahedra glued along their whole boundary.
        let facets = complex.facet_indices();
        assert_eq!(facets.len(), 2);
        assert_eq!(
            complex.simplices[facets[0]].faces,
            complex.simplices[facets[1]].faces
        );
        let report = check_pseudomanifold(&complex);
        assert!(report.all_hold(), "{:?}", report.witnesses);
    }

    #[test]
    fn d1_circle_dual() {
        let edges = vec![Edge::new(0, 0, 0), Edge::new(0, 0, 1)];
        let g = ColoredGraph::closed(1, 1, edges);
        assert!(g.is_valid());
        let complex = dual_complex(&g);
        assert_eq!(complex.ground.len(), 2);
        let counts = complex.counts_by_dimension();
        assert_eq!(counts[&0], 2);
        assert_eq!(counts[&1], 2);
        // Two 1-simplices on the same two vertices: a circle.
        let facets = complex.facet_indices();
        assert_eq!(
            complex.simplices[facets[0]].members,
            complex.simplices[facets[1]].members
        );
        assert!(check_pseudomanifold(&complex).all_hold());
    }

    #[test]
    fn hand_built_branching_complex_fails() {
        // Three triangles sharing one edge in a 2-dimensional complex.
        let tri = |a: usize, b: usize, c: usize| Simplex {
            members: vec![a, b, c],
            indexing_colors: vec![],
            indexing_component: 0,
            faces: vec![3],
        };
        let shared_edge = Simplex {
            members: vec![0, 1],
            indexing_colors: vec![],
            indexing_component: 0,
            faces: vec![],
        };
        let complex = DualComplex {
            dimension: 2,
            ground: Vec::new(),
            simplices: vec![tri(0, 1, 2), tri(0, 1, 3), tri(0, 1, 4), shared_edge],
        };
        let report = check_pseudomanifold(&complex);
        assert!(!report.non_branching);
    }

    #[test]
    fn random_corpus_duals_are_pseudomanifolds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let d = 2 + (rng.gen::<u32>() % 3) as usize;
            let p = 1 + (rng.gen::<u32>() % 4) as usize;
            let g = random_closed_graph(d, p, &mut rng);
            let complex = dual_complex(&g);
            // Facets are the graph vertices; ridges are the edges.
            let counts = complex.counts_by_dimension();
            assert_eq!(counts[&d], g.vertex_count());
            assert_eq!(counts[&(d - 1)], g.edges().len());
            let report = check_pseudomanifold(&complex);
            assert!(report.all_hold(), "{:?}", report.witnesses);
        }
    }

    #[test]
    fn bubbles_partition_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = random_closed_graph(3, 4, &mut rng);
        for colors in crate::combinatorics::combinations(4, 2) {
            let bubbles = enumerate_bubbles(&g, &colors);
            let mut all_rows: Vec<usize> =
                bubbles.iter().flat_map(|b| b.vertex_rows.clone()).collect();
            all_rows.sort_unstable();
            let expect: Vec<usize> = (0..g.vertex_count()).collect();
            assert_eq!(all_rows, expect);
        }
    }
}
