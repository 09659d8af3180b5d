//! The Lie algebra of marked D-colored graphs: star contraction, the
//! commutator bracket, and closure of the melonic subalgebra.
//!
//! Graphs here carry colors `{0, ..., D-1}` (dimension `D-1` in the
//! [`ColoredGraph`] convention), matching the D-bubbles of a
//! `(D+1)`-colored graph.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dipoles::is_melonic;
use crate::graph::{ColoredGraph, Edge, GraphError};

/// A closed colored graph with a distinguished negative vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGraph {
    pub graph: ColoredGraph,
    /// Index of the marked negative vertex.
    pub mark: usize,
}

impl MarkedGraph {
    pub fn new(graph: ColoredGraph, mark: usize) -> Result<Self, GraphError> {
        let report = graph.validate();
        if !report.is_valid() {
            return Err(GraphError::Invalid(report));
        }
        if mark >= graph.negative_count() {
            return Err(GraphError::Parse(format!("mark {mark} out of range")));
        }
        Ok(MarkedGraph { graph, mark })
    }

    /// Canonical key respecting the mark: the least BFS relabeling code
    /// over positive start vertices, extended by the mark's relabeled id.
    pub fn canonical_key(&self) -> Vec<usize> {
        let g = &self.graph;
        let n = g.vertex_count();
        let incidence = g.incidence();
        let neighbor = |row: usize, c: usize| -> usize {
            let e = &g.edges()[incidence[row][c]];
            if row < g.positive_count() {
                g.positive_count() + e.negative
            } else {
                e.positive
            }
        };
        let mark_row = g.positive_count() + self.mark;
        let mut best: Option<Vec<usize>> = None;
        for start in 0..g.positive_count() {
            let mut id = vec![usize::MAX; n];
            let mut order = vec![start];
            id[start] = 0;
            let mut code = Vec::with_capacity(n * (g.dimension() + 1) + 1);
            let mut head = 0;
            while head < order.len() {
                let row = order[head];
                head += 1;
                for c in 0..=g.dimension() {
                    let nb = neighbor(row, c);
                    if id[nb] == usize::MAX {
                        id[nb] = order.len();
                        order.push(nb);
                    }
                    code.push(id[nb]);
                }
            }
            code.push(id[mark_row]);
            if best.as_ref().map_or(true, |b| code < *b) {
                best = Some(code);
            }
        }
        best.unwrap_or_default()
    }

    pub fn serialize(&self) -> Result<String, GraphError> {
        Ok(format!("{} mark {}", self.graph.serialize()?, self.mark))
    }
}

/// Contract graphs `b1` and `b2` at the pair (positive `v1` of `b1`,
/// negative `vbar2` of `b2`): delete both vertices and reconnect the
/// half-edges color by color. Vertices of `b1` keep their indices (those
/// past the deleted ones shift down); `b2`'s follow with an offset.
pub fn star_contract(
    b1: &ColoredGraph,
    v1: usize,
    b2: &ColoredGraph,
    vbar2: usize,
) -> Result<ColoredGraph, GraphError> {
    if b1.dimension() != b2.dimension() {
        return Err(GraphError::Parse(format!(
            "dimension mismatch: {} vs {}",
            b1.dimension(),
            b2.dimension()
        )));
    }
    let d = b1.dimension();
    let p1 = b1.positive_count();
    let n1 = b1.negative_count();
    let inc1 = b1.incidence();
    let inc2 = b2.incidence();
    let mut edges = Vec::new();
    let map_p1 = |p: usize| if p > v1 { p - 1 } else { p };
    let map_p2 = |p: usize| p1 - 1 + p;
    let map_n2 = |n: usize| n1 + if n > vbar2 { n - 1 } else { n };
    for e in b1.edges() {
        if e.positive == v1 {
            continue;
        }
        edges.push(Edge::new(map_p1(e.positive), e.negative, e.color));
    }
    for e in b2.edges() {
        if e.negative == vbar2 {
            continue;
        }
        edges.push(Edge::new(map_p2(e.positive), map_n2(e.negative), e.color));
    }
    for c in 0..=d {
        let n_c = b1.edges()[inc1[v1][c]].negative;
        let p_c = b2.edges()[inc2[b2.positive_count() + vbar2][c]].positive;
        edges.push(Edge::new(map_p2(p_c), n_c, c));
    }
    let result = ColoredGraph::closed(d, p1 + b2.positive_count() - 1, edges);
    let report = result.validate();
    if !report.is_valid() {
        return Err(GraphError::Invalid(report));
    }
    Ok(result)
}

/// A finite formal linear combination of marked-graph isomorphism classes
/// with exact rational coefficients.
#[derive(Debug, Clone, Default)]
pub struct GraphChain {
    terms: BTreeMap<Vec<usize>, (MarkedGraph, BigRational)>,
}

impl GraphChain {
    pub fn zero() -> Self {
        GraphChain::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn single(l: MarkedGraph) -> Self {
        let mut c = GraphChain::zero();
        c.add(l, BigRational::one());
        c
    }

    pub fn add(&mut self, l: MarkedGraph, coefficient: BigRational) {
        if coefficient.is_zero() {
            return;
        }
        let key = l.canonical_key();
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((l, coefficient));
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().1 += coefficient;
                if e.get().1.is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_chain(&mut self, other: &GraphChain, scale: &BigRational) {
        for (l, c) in other.iter() {
            self.add(l.clone(), c * scale);
        }
    }

    pub fn scaled(&self, scale: &BigRational) -> GraphChain {
        let mut out = GraphChain::zero();
        out.add_chain(self, scale);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MarkedGraph, &BigRational)> {
        self.terms.values().map(|(l, c)| (l, c))
    }

    /// Chain serialization: one `(coefficient, marked graph)` line per term.
    pub fn to_text(&self) -> Result<String, GraphError> {
        let mut out = String::new();
        for (l, c) in self.iter() {
            out.push_str(&format!("{c} {}\n", l.serialize()?));
        }
        Ok(out)
    }
}

impl PartialEq for GraphChain {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(other.terms.iter())
                .all(|((ka, (_, ca)), (kb, (_, cb)))| ka == kb && ca == cb)
    }
}
impl Eq for GraphChain {}

/// The bracket of two marked graphs:
/// `sum_v (B1 *_{(v, mark2)} B2, mark1) - sum_v (B2 *_{(v, mark1)} B1, mark2)`.
pub fn bracket(l1: &MarkedGraph, l2: &MarkedGraph) -> Result<GraphChain, GraphError> {
    let mut out = GraphChain::zero();
    for v in 0..l1.graph.positive_count() {
        let contracted = star_contract(&l1.graph, v, &l2.graph, l2.mark)?;
        out.add(MarkedGraph::new(contracted, l1.mark)?, BigRational::one());
    }
    for v in 0..l2.graph.positive_count() {
        let contracted = star_contract(&l2.graph, v, &l1.graph, l1.mark)?;
        out.add(MarkedGraph::new(contracted, l2.mark)?, -BigRational::one());
    }
    Ok(out)
}

/// Bilinear extension of the bracket to chains.
pub fn bracket_chains(a: &GraphChain, b: &GraphChain) -> Result<GraphChain, GraphError> {
    let mut out = GraphChain::zero();
    for (la, ca) in a.iter() {
        for (lb, cb) in b.iter() {
            out.add_chain(&bracket(la, lb)?, &(ca * cb));
        }
    }
    Ok(out)
}

/// True iff every basis graph of the chain is melonic.
pub fn is_melonic_closed(chain: &GraphChain) -> bool {
    chain.iter().all(|(l, _)| is_melonic(&l.graph).0)
}
