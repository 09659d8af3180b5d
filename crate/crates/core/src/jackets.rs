//! Jackets (ribbon-graph views selected by a color cycle), their genera,
//! and the degree invariant with its identities.

use crate::bubbles::{enumerate_bubbles, extract, top_bubble_count, Bubble};
use crate::combinatorics::permutations;
use crate::graph::{Color, ColoredGraph};

/// A jacket: the ribbon graph on all vertices and edges whose faces are the
/// bicolored cycles of color pairs adjacent in the defining cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jacket {
    /// Defining `(D+1)`-cycle, canonical: starts at the smallest color,
    /// orientation chosen so the second entry is less than the last.
    pub cycle: Vec<Color>,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub genus: usize,
}

impl Jacket {
    pub fn euler_characteristic(&self) -> i64 {
        self.face_count as i64 - self.edge_count as i64 + self.vertex_count as i64
    }
}

/// Canonicalize a cycle over rotation and reversal: lexicographically least
/// rotation/reflection starting at the smallest entry.
fn canonical_cycle(cycle: &[Color]) -> Vec<Color> {
    let n = cycle.len();
    let mut best: Option<Vec<Color>> = None;
    for start in 0..n {
        for dir in [1i64, -1] {
            let candidate: Vec<Color> = (0..n)
                .map(|k| {
                    let idx = (start as i64 + dir * k as i64).rem_euclid(n as i64);
                    cycle[idx as usize]
                })
                .collect();
            if best.as_ref().map_or(true, |b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    best.unwrap()
}

/// Count the bicolored faces of color pairs adjacent in `cycle`, restricted
/// to the vertex rows of `within` when given.
fn count_faces(graph: &ColoredGraph, cycle: &[Color], within: Option<&Bubble>) -> usize {
    let n = cycle.len();
    let mut total = 0;
    for q in 0..n {
        let a = cycle[q];
        let b = cycle[(q + 1) % n];
        let pair = if a < b { [a, b] } else { [b, a] };
        for bubble in enumerate_bubbles(graph, &pair) {
            let keep = match within {
                None => true,
                Some(w) => w.contains_row(bubble.vertex_rows[0]),
            };
            if keep {
                total += 1;
            }
        }
    }
    total
}

fn jacket_from_cycle(
    graph: &ColoredGraph,
    cycle: Vec<Color>,
    vertex_count: usize,
    edge_count: usize,
    within: Option<&Bubble>,
) -> Jacket {
    let face_count = count_faces(graph, &cycle, within);
    let chi = face_count as i64 - edge_count as i64 + vertex_count as i64;
    assert!(
        chi <= 2 && (2 - chi) % 2 == 0,
        "jacket Euler characteristic {chi} is not 2 - 2g"
    );
    Jacket {
        cycle,
        vertex_count,
        edge_count,
        face_count,
        genus: ((2 - chi) / 2) as usize,
    }
}

/// All jackets of a valid connected closed graph: one per `(D+1)`-cycle
/// modulo rotation and reversal, i.e. `D!/2` of them for `D >= 2`. `D < 2`
/// admits no nontrivial cycle and yields none.
pub fn enumerate_jackets(graph: &ColoredGraph) -> Vec<Jacket> {
    let d = graph.dimension();
    if d < 2 {
        return Vec::new();
    }
    let rest: Vec<Color> = (1..=d).collect();
    let mut cycles: Vec<Vec<Color>> = permutations(&rest)
        .into_iter()
        .filter(|p| p[0] < p[p.len() - 1])
        .map(|p| {
            let mut cycle = vec![0];
            cycle.extend(p);
            cycle
        })
        .collect();
    cycles.sort();
    let v = graph.vertex_count();
    let e = graph.edges().len();
    cycles
        .into_iter()
        .map(|c| jacket_from_cycle(graph, c, v, e, None))
        .collect()
}

/// Sum of jacket genera.
pub fn degree(graph: &ColoredGraph) -> usize {
    enumerate_jackets(graph).iter().map(|j| j.genus).sum()
}

/// Jackets of the D-bubbles of species `i-hat`, induced from a graph jacket
/// by deleting color `i` from its cycle: one jacket per bubble component.
/// Cycles are reported in the bubble's own renumbered colors so they match
/// [`enumerate_jackets`] on the extracted bubble.
pub fn bubble_jackets(graph: &ColoredGraph, jacket: &Jacket, skip: Color) -> Vec<Jacket> {
    let d = graph.dimension();
    assert!(jacket.cycle.contains(&skip));
    let colors: Vec<Color> = (0..=d).filter(|&c| c != skip).collect();
    let reduced: Vec<Color> = jacket.cycle.iter().copied().filter(|&c| c != skip).collect();
    // Renumber by rank within the bubble's color set, then canonicalize.
    let ranked: Vec<Color> = reduced
        .iter()
        .map(|c| colors.binary_search(c).unwrap())
        .collect();
    let canonical = canonical_cycle(&ranked);
    enumerate_bubbles(graph, &colors)
        .iter()
        .map(|b| {
            let sub = extract(graph, b);
            let v = sub.vertex_count();
            let e = sub.edges().len();
            jacket_from_cycle(&sub, canonical.clone(), v, e, None)
        })
        .collect()
}

/// Residual of the degree-bubble identity
/// `omega(G) - (D-1)!/2 (p + D - B^[D]) - sum omega(B)`; zero on every
/// valid connected closed graph.
pub fn degree_bubble_residual(graph: &ColoredGraph) -> i64 {
    let d = graph.dimension();
    let p = graph.positive_count() as i64;
    // Work with doubled degrees so (D-1)!/2 stays integral for D = 2.
    let fact: i64 = (1..=(d as i64 - 1)).product();
    let b_top = top_bubble_count(graph) as i64;
    let mut bubble_degree_sum = 0i64;
    for i in 0..=d {
        let colors: Vec<Color> = (0..=d).filter(|&c| c != i).collect();
        for b in enumerate_bubbles(graph, &colors) {
            bubble_degree_sum += degree(&extract(graph, &b)) as i64;
        }
    }
    let lhs2 = 2 * degree(graph) as i64;
    let rhs2 = fact * (p + d as i64 - b_top) + 2 * bubble_degree_sum;
    lhs2 - rhs2
}

/// Check the inequality `omega(G) >= D * sum omega(B^{D-hat})` over the
/// bubbles lacking the largest color.
pub fn bubble_degree_inequality_holds(graph: &ColoredGraph) -> bool {
    let d = graph.dimension();
    let colors: Vec<Color> = (0..d).collect();
    let sum: usize = enumerate_bubbles(graph, &colors)
        .iter()
        .map(|b| degree(&extract(graph, b)))
        .sum();
    degree(graph) >= d * sum
}
