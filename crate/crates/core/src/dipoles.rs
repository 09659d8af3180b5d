//! k-dipole detection, contraction and creation, routing to combinatorial
//! core graphs, melonicity, and canonical labeling.

use std::collections::BTreeMap;

use crate::bubbles::enumerate_bubbles;
use crate::combinatorics::combinations;
use crate::graph::{Color, ColoredGraph, Edge, GraphError};

/// A k-dipole: a positive/negative vertex pair joined by edges of the
/// listed colors, whose endpoints lie in distinct bubbles of the
/// complementary color set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dipole {
    pub positive: usize,
    pub negative: usize,
    /// Sorted shared colors defining the dipole; `k = colors.len()`.
    pub colors: Vec<Color>,
    /// Component ids of the two separated complementary-color bubbles,
    /// (side of `positive`, side of `negative`).
    pub separated: (usize, usize),
    /// Revision of the graph this dipole was found in.
    pub revision: u64,
}

impl Dipole {
    pub fn k(&self) -> usize {
        self.colors.len()
    }
}

/// Colors on which the pair `(v, v-bar)` is directly joined.
fn shared_colors(graph: &ColoredGraph, positive: usize, negative: usize) -> Vec<Color> {
    graph
        .edges()
        .iter()
        .filter(|e| e.positive == positive && e.negative == negative)
        .map(|e| e.color)
        .collect()
}

/// All k-dipoles of a valid closed graph: vertex pairs sharing at least k
/// edges, one dipole per k-color subset passing the separation condition.
pub fn find_dipoles(graph: &ColoredGraph, k: usize) -> Vec<Dipole> {
    assert!(k >= 1 && k <= graph.dimension());
    let mut out = Vec::new();
    for v in 0..graph.positive_count() {
        for vb in 0..graph.negative_count() {
            let mut shared = shared_colors(graph, v, vb);
            shared.sort_unstable();
            if shared.len() < k {
                continue;
            }
            for subset in combinations(shared.len(), k) {
                let colors: Vec<Color> = subset.iter().map(|&i| shared[i]).collect();
                let complement: Vec<Color> =
                    (0..=graph.dimension()).filter(|c| !colors.contains(c)).collect();
                let bubbles = enumerate_bubbles(graph, &complement);
                let row_v = v;
                let row_vb = graph.positive_count() + vb;
                let comp_v = bubbles.iter().position(|b| b.contains_row(row_v)).unwrap();
                let comp_vb = bubbles.iter().position(|b| b.contains_row(row_vb)).unwrap();
                if comp_v != comp_vb {
                    out.push(Dipole {
                        positive: v,
                        negative: vb,
                        colors,
                        separated: (comp_v, comp_vb),
                        revision: graph.revision(),
                    });
                }
            }
        }
    }
    out
}

/// Contract a dipole: delete its two vertices and shared edges, rejoining
/// the dangling half-edges color by color.
pub fn contract(graph: &ColoredGraph, dipole: &Dipole) -> Result<ColoredGraph, GraphError> {
    if dipole.revision != graph.revision() {
        return Err(GraphError::StaleDipole);
    }
    let (v, vb) = (dipole.positive, dipole.negative);
    let mut edges = Vec::with_capacity(graph.edges().len() - 2 * dipole.k());
    // Per color outside the dipole: v's edge runs to some negative n, the
    // negative vertex's edge comes from some positive p; splice p -- n.
    let incidence = graph.incidence();
    let mut dropped = vec![false; graph.edges().len()];
    let mut spliced: Vec<Edge> = Vec::new();
    for c in 0..=graph.dimension() {
        if dipole.colors.contains(&c) {
            let idx = incidence[v][c];
            let e = &graph.edges()[idx];
            debug_assert!(e.negative == vb);
            dropped[idx] = true;
            continue;
        }
        let ev = incidence[v][c];
        let evb = incidence[graph.positive_count() + vb][c];
        let n = graph.edges()[ev].negative;
        let p = graph.edges()[evb].positive;
        // Separation guarantees the pair shares no color outside the
        // dipole, so the splice never touches the removed vertices.
        assert!(p != v && n != vb, "dipole endpoints share color {c} outside the dipole");
        dropped[ev] = true;
        dropped[evb] = true;
        spliced.push(Edge::new(p, n, c));
    }
    for (i, e) in graph.edges().iter().enumerate() {
        if !dropped[i] {
            edges.push(*e);
        }
    }
    edges.extend(spliced);
    // Reindex past the removed vertices.
    for e in &mut edges {
        if e.positive > v {
            e.positive -= 1;
        }
        if e.negative > vb {
            e.negative -= 1;
        }
    }
    let result = ColoredGraph::closed(graph.dimension(), graph.positive_count() - 1, edges);
    let report = result.validate();
    if !report.is_valid() {
        return Err(GraphError::Invalid(report));
    }
    Ok(result)
}

/// Specification of a dipole creation: the dipole colors plus, per
/// remaining color, the edge to cut and reconnect through the new pair.
#[derive(Debug, Clone)]
pub struct CreationSpec {
    pub colors: Vec<Color>,
    /// remaining color -> index of the edge (of that color) to reroute.
    pub attachments: BTreeMap<Color, usize>,
}

/// Create a dipole: the inverse of [`contract`]. The new positive vertex
/// takes the next positive index, likewise on the negative side. Each
/// attachment edge `(p, n, c)` is replaced by `(p, new_negative, c)` and
/// `(new_positive, n, c)`.
pub fn create(graph: &ColoredGraph, spec: &CreationSpec) -> Result<ColoredGraph, GraphError> {
    let d = graph.dimension();
    let mut colors = spec.colors.clone();
    colors.sort_unstable();
    colors.dedup();
    if colors.len() != spec.colors.len() || colors.is_empty() || colors.len() > d {
        return Err(GraphError::BadCreation(format!(
            "dipole colors {:?} must be distinct and number 1..=D",
            spec.colors
        )));
    }
    let remaining: Vec<Color> = (0..=d).filter(|c| !colors.contains(c)).collect();
    if spec.attachments.len() != remaining.len()
        || remaining.iter().any(|c| !spec.attachments.contains_key(c))
    {
        return Err(GraphError::BadCreation(format!(
            "attachments must cover exactly the colors {remaining:?}"
        )));
    }
    let mut used = std::collections::BTreeSet::new();
    for (&c, &idx) in &spec.attachments {
        if idx >= graph.edges().len() {
            return Err(GraphError::BadCreation(format!("edge index {idx} out of range")));
        }
        if graph.edges()[idx].color != c {
            return Err(GraphError::BadCreation(format!(
                "edge {idx} has color {} but is attached for color {c}",
                graph.edges()[idx].color
            )));
        }
        if !used.insert(idx) {
            return Err(GraphError::BadCreation(format!("edge {idx} used twice")));
        }
    }

    let new_p = graph.positive_count();
    let new_n = graph.negative_count();
    let mut edges: Vec<Edge> = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !used.contains(i))
        .map(|(_, e)| *e)
        .collect();
    for &c in &colors {
        edges.push(Edge::new(new_p, new_n, c));
    }
    for &c in &remaining {
        let e = &graph.edges()[spec.attachments[&c]];
        edges.push(Edge::new(e.positive, new_n, c));
        edges.push(Edge::new(new_p, e.negative, c));
    }
    let result = ColoredGraph::closed(d, graph.positive_count() + 1, edges);
    let report = result.validate();
    if !report.is_valid() {
        return Err(GraphError::Invalid(report));
    }
    // The new pair must genuinely form a dipole: separation condition.
    let complement: Vec<Color> = remaining.clone();
    let bubbles = enumerate_bubbles(&result, &complement);
    let comp_p = bubbles.iter().position(|b| b.contains_row(new_p)).unwrap();
    let comp_n = bubbles
        .iter()
        .position(|b| b.contains_row(result.positive_count() + new_n))
        .unwrap();
    if comp_p == comp_n {
        return Err(GraphError::BadCreation(
            "resulting pair fails the separation condition: both endpoints lie in the \
             same complementary bubble"
                .into(),
        ));
    }
    Ok(result)
}

/// One routing contraction: a color-i 1-dipole, recorded in the labeling
/// current at the time of the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingStep {
    pub color: Color,
    pub positive: usize,
    pub negative: usize,
}

/// Replayable log of a routing pass.
#[derive(Debug, Clone, Default)]
pub struct RoutingLog {
    pub steps: Vec<RoutingStep>,
}

impl RoutingLog {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&format!("contract color {} p{} n{}\n", s.color, s.positive, s.negative));
        }
        out
    }
}

/// Route a valid closed graph to a combinatorial core graph by 1-dipole
/// contraction, colors processed in descending order. Within each color
/// the bubble containing positive vertex 0 is the root; the canonical
/// least edge joining the root bubble to another bubble is contracted.
pub fn route_to_core(graph: &ColoredGraph) -> Result<(ColoredGraph, RoutingLog), GraphError> {
    let report = graph.validate();
    if !report.is_valid() {
        return Err(GraphError::Invalid(report));
    }
    let mut g = graph.clone();
    let mut log = RoutingLog::default();
    for color in (0..=g.dimension()).rev() {
        loop {
            let complement: Vec<Color> =
                (0..=g.dimension()).filter(|&c| c != color).collect();
            let bubbles = enumerate_bubbles(&g, &complement);
            if bubbles.len() <= 1 {
                break;
            }
            let root = bubbles.iter().position(|b| b.contains_row(0)).unwrap();
            // Canonically least color-`color` edge leaving the root bubble.
            let candidate = g
                .edges()
                .iter()
                .find(|e| {
                    if e.color != color {
                        return false;
                    }
                    let cp = bubbles.iter().position(|b| b.contains_row(e.positive)).unwrap();
                    let cn = bubbles
                        .iter()
                        .position(|b| b.contains_row(g.positive_count() + e.negative))
                        .unwrap();
                    cp != cn && (cp == root || cn == root)
                })
                .copied()
                .expect("connected graph has a bubble-joining edge");
            let dipole = Dipole {
                positive: candidate.positive,
                negative: candidate.negative,
                colors: vec![color],
                separated: (0, 0),
                revision: g.revision(),
            };
            log.steps.push(RoutingStep {
                color,
                positive: candidate.positive,
                negative: candidate.negative,
            });
            let mut d = dipole;
            d.revision = g.revision();
            g = contract(&g, &d)?;
        }
    }
    Ok((g, log))
}

/// Decide melonicity by iterated elementary-melon contraction, returning
/// the removal sequence on success. A pair joined on exactly D colors is
/// automatically a D-dipole, and contracting it preserves the degree, so
/// the greedy strategy is exact.
pub fn is_melonic(graph: &ColoredGraph) -> (bool, Vec<Dipole>) {
    let d = graph.dimension();
    let mut g = graph.clone();
    let mut witness = Vec::new();
    loop {
        if g.positive_count() == 1 {
            return (true, witness);
        }
        let mut found = None;
        'search: for v in 0..g.positive_count() {
            for vb in 0..g.negative_count() {
                let colors = shared_colors(&g, v, vb);
                if colors.len() == d {
                    found = Some((v, vb, colors));
                    break 'search;
                }
            }
        }
        let Some((v, vb, mut colors)) = found else {
            return (false, witness);
        };
        colors.sort_unstable();
        let dipole = Dipole {
            positive: v,
            negative: vb,
            colors,
            separated: (0, 0),
            revision: g.revision(),
        };
        witness.push(dipole.clone());
        g = contract(&g, &dipole).expect("D-sharing pair contracts cleanly");
    }
}

/// Canonical form under color- and sign-preserving isomorphism. Valid
/// closed graphs have exactly one neighbor per color at every vertex, so a
/// breadth-first sweep scanning colors in order is deterministic; the form
/// is the least relabeled adjacency code over all start vertices.
pub fn canonical_form(graph: &ColoredGraph) -> Vec<usize> {
    let n = graph.vertex_count();
    let incidence = graph.incidence();
    let neighbor = |row: usize, c: Color| -> usize {
        let e = &graph.edges()[incidence[row][c]];
        if row < graph.positive_count() {
            graph.positive_count() + e.negative
        } else {
            e.positive
        }
    };
    let mut best: Option<Vec<usize>> = None;
    for start in 0..graph.positive_count() {
        let mut id = vec![usize::MAX; n];
        let mut order = vec![start];
        id[start] = 0;
        let mut code = Vec::with_capacity(n * (graph.dimension() + 1));
        let mut head = 0;
        while head < order.len() {
            let row = order[head];
            head += 1;
            for c in 0..=graph.dimension() {
                let nb = neighbor(row, c);
                if id[nb] == usize::MAX {
                    id[nb] = order.len();
                    order.push(nb);
                }
                code.push(id[nb]);
            }
        }
        if best.as_ref().map_or(true, |b| code < *b) {
            best = Some(code);
        }
    }
    best.unwrap_or_default()
}

pub fn is_isomorphic(a: &ColoredGraph, b: &ColoredGraph) -> bool {
    a.dimension() == b.dimension()
        && a.vertex_count() == b.vertex_count()
        && canonical_form(a) == canonical_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bubbles::top_bubble_count;
    use crate::corpus::random_closed_graph;
    use crate::jackets::degree;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn melon_chain(links: usize) -> ColoredGraph {
        let mut edges = Vec::new();
        for k in 0..links {
            for c in 1..=3 {
                edges.push(Edge::new(k, k, c));
            }
            edges.push(Edge::new(k, (k + 1) % links, 0));
        }
        ColoredGraph::closed(3, links, edges)
    }

    fn twisted_necklace() -> ColoredGraph {
        let mut edges = Vec::new();
        for k in 0..2usize {
            edges.push(Edge::new(k, k, 0));
            edges.push(Edge::new(k, k, 1));
            edges.push(Edge::new(k, 1 - k, 2));
            edges.push(Edge::new(k, 1 - k, 3));
        }
        ColoredGraph::closed(3, 2, edges)
    }

    #[test]
    fn supermelon_has_no_dipoles() {
        let g = ColoredGraph::supermelon(3);
        for k in 1..=3 {
            assert!(find_dipoles(&g, k).is_empty(), "k = {k}");
        }
    }

    #[test]
    fn melon_chain_d_dipoles() {
        // Each of the 4 melon pairs shares colors {1,2,3} and its two
        // color-0 1-bubbles (edges) differ: 4 D-dipoles.
        let g = melon_chain(4);
        let dipoles = find_dipoles(&g, 3);
        assert_eq!(dipoles.len(), 4);
        for d in &dipoles {
            assert_eq!(d.colors, vec![1, 2, 3]);
            assert_eq!(d.positive, d.negative);
        }
    }

    #[test]
    fn contraction_preserves_degree_for_d_dipoles() {
        let g = melon_chain(4);
        let dipole = &find_dipoles(&g, 3)[0];
        let contracted = contract(&g, dipole).unwrap();
        assert_eq!(contracted.vertex_count(), g.vertex_count() - 2);
        assert_eq!(degree(&contracted), degree(&g));
    }

    #[test]
    fn one_dipole_contraction_preserves_degree_on_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut seen = 0;
        while seen < 15 {
            let g = random_closed_graph(3, 3, &mut rng);
            let dipoles = find_dipoles(&g, 1);
            if dipoles.is_empty() {
                continue;
            }
            seen += 1;
            let contracted = contract(&g, &dipoles[0]).unwrap();
            assert_eq!(degree(&contracted), degree(&g));
        }
    }

    #[test]
    fn two_dipole_contraction_formula_on_corpus() {
        // omega(G) = (D-1)!/2 ((D+1)k - k^2 - D) + omega(G/d): for D = 3,
        // k = 2 the offset is exactly 1.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut seen = 0;
        while seen < 10 {
            let g = random_closed_graph(3, 3, &mut rng);
            let dipoles = find_dipoles(&g, 2);
            if dipoles.is_empty() {
                continue;
            }
            seen += 1;
            let contracted = contract(&g, &dipoles[0]).unwrap();
            assert_eq!(degree(&g), 1 + degree(&contracted));
        }
    }

    #[test]
    fn stale_dipole_rejected() {
        let g = melon_chain(4);
        let dipole = find_dipoles(&g, 3)[0].clone();
        let g2 = contract(&g, &dipole).unwrap();
        assert!(matches!(contract(&g2, &dipole), Err(GraphError::StaleDipole)));
    }

    #[test]
    fn create_then_contract_is_identity() {
        let g = melon_chain(3);
        // Insert a melon of color 0 along the first color-0 edge: dipole
        // colors {1,2,3}, attachment reroutes a color-0 edge.
        let edge0 = g.edges().iter().position(|e| e.color == 0).unwrap();
        let spec = CreationSpec {
            colors: vec![1, 2, 3],
            attachments: [(0usize, edge0)].into_iter().collect(),
        };
        let grown = create(&g, &spec).unwrap();
        assert_eq!(grown.vertex_count(), g.vertex_count() + 2);
        assert!(grown.is_valid());
        let dipole = find_dipoles(&grown, 3)
            .into_iter()
            .find(|d| d.positive == g.positive_count())
            .unwrap();
        let back = contract(&grown, &dipole).unwrap();
        assert!(is_isomorphic(&back, &g));
    }

    #[test]
    fn creation_rejects_reused_edge() {
        let g = melon_chain(3);
        let edge0 = g.edges().iter().position(|e| e.color == 0).unwrap();
        let spec = CreationSpec {
            colors: vec![2, 3],
            attachments: [(0usize, edge0), (1, edge0)].into_iter().collect(),
        };
        assert!(matches!(create(&g, &spec), Err(GraphError::BadCreation(_))));
    }

    #[test]
    fn supermelon_routes_to_itself() {
        let g = ColoredGraph::supermelon(3);
        let (core, log) = route_to_core(&g).unwrap();
        assert!(is_isomorphic(&core, &g));
        assert!(log.steps.is_empty());
    }

    #[test]
    fn melonic_graphs_route_to_supermelon() {
        let g = melon_chain(5);
        let (core, log) = route_to_core(&g).unwrap();
        assert!(is_isomorphic(&core, &ColoredGraph::supermelon(3)));
        assert_eq!(log.steps.len(), 4);
    }

    #[test]
    fn routing_invariants_on_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let d = 3 + (rng.gen::<u32>() % 2) as usize;
            let p = 1 + (rng.gen::<u32>() % 3) as usize;
            let g = random_closed_graph(d, p, &mut rng);
            let (core, _log) = route_to_core(&g).unwrap();
            // Core graphs have one D-bubble per color.
            assert_eq!(top_bubble_count(&core), d + 1);
            // p - B^[D] is conserved by 1-dipole moves.
            let before = g.positive_count() as i64 - top_bubble_count(&g) as i64;
            let after = core.positive_count() as i64 - (d as i64 + 1);
            assert_eq!(before, after);
            assert_eq!(degree(&core), degree(&g));
        }
    }

    #[test]
    fn melonicity_matches_zero_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..30 {
            let g = random_closed_graph(3, 3, &mut rng);
            let (melonic, witness) = is_melonic(&g);
            assert_eq!(melonic, degree(&g) == 0, "graph {:?}", g.edges());
            if melonic {
                assert_eq!(witness.len(), g.positive_count() - 1);
            }
        }
        assert!(is_melonic(&ColoredGraph::supermelon(3)).0);
        assert!(is_melonic(&melon_chain(4)).0);
        assert!(!is_melonic(&twisted_necklace()).0);
    }

    #[test]
    fn canonical_form_identifies_relabelings() {
        let g = melon_chain(4);
        // Rotate the necklace: an isomorphic relabeling.
        let rotated: Vec<Edge> = g
            .edges()
            .iter()
            .map(|e| Edge::new((e.positive + 1) % 4, (e.negative + 1) % 4, e.color))
            .collect();
        let h = ColoredGraph::closed(3, 4, rotated);
        assert!(is_isomorphic(&g, &h));
        assert!(!is_isomorphic(&g, &twisted_necklace()));
    }
}
