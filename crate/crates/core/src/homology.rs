//! Integer homology of the graph complex and a finite presentation of the
//! fundamental group.
//!
//! Chain groups are generated by the d-bubbles; the boundary of a d-bubble
//! is the alternating sum over dropped colors of the contained
//! (d-1)-bubbles. Homology is computed exactly over the integers via Smith
//! normal form.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bubbles::{enumerate_bubbles, Bubble};
use crate::combinatorics::combinations;
use crate::graph::{ColoredGraph, GraphError, Sign, Vertex};

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &BigInt) {
        self.data[r * self.cols + c] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = a * other.get(k, c);
                    out.add_to(r, c, &v);
                }
            }
        }
        out
    }

    /// Plain dense dump: one row per line, entries space separated.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Invariant factors (diagonal of the Smith normal form), positive and in
/// divisibility order; their count is the rank.
pub fn smith_invariant_factors(matrix: &IntMatrix) -> Vec<BigInt> {
    let mut m = matrix.clone();
    let mut factors = Vec::new();
    let mut top = 0usize;
    let (rows, cols) = (m.rows, m.cols);
    while top < rows.min(cols) {
        // Locate the smallest-magnitude nonzero entry in the working block.
        let mut pivot: Option<(usize, usize)> = None;
        for r in top..rows {
            for c in top..cols {
                if m.get(r, c).is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((r, c)),
                    Some((pr, pc)) => {
                        if m.get(r, c).abs() < m.get(pr, pc).abs() {
                            pivot = Some((r, c));
                        }
                    }
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        // Move it to (top, top).
        if pr != top {
            for c in 0..cols {
                m.data.swap(pr * cols + c, top * cols + c);
            }
        }
        if pc != top {
            for r in 0..rows {
                m.data.swap(r * cols + pc, r * cols + top);
            }
        }
        // Reduce the pivot row and column; repeat until clean since
        // remainders can reintroduce entries.
        loop {
            let mut dirty = false;
            for r in (top + 1)..rows {
                if m.get(r, top).is_zero() {
                    continue;
                }
                let q = m.get(r, top) / m.get(top, top);
                if !q.is_zero() {
                    for c in top..cols {
                        let v = m.get(top, c) * &q;
                        let cur = m.get(r, c) - v;
                        m.set(r, c, cur);
                    }
                }
                if !m.get(r, top).is_zero() {
                    // Remainder smaller than pivot: swap rows and restart.
                    for c in 0..cols {
                        m.data.swap(r * cols + c, top * cols + c);
                    }
                    dirty = true;
                }
            }
            for c in (top + 1)..cols {
                if m.get(top, c).is_zero() {
                    continue;
                }
                let q = m.get(top, c) / m.get(top, top);
                if !q.is_zero() {
                    for r in top..rows {
                        let v = m.get(r, top) * &q;
                        let cur = m.get(r, c) - v;
                        m.set(r, c, cur);
                    }
                }
                if !m.get(top, c).is_zero() {
                    for r in 0..rows {
                        m.data.swap(r * cols + c, r * cols + top);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // Divisibility fixup: the pivot must divide every remaining entry.
        let mut offender = None;
        'scan: for r in (top + 1)..rows {
            for c in (top + 1)..cols {
                if !(m.get(r, c) % m.get(top, top)).is_zero() {
                    offender = Some(r);
                    break 'scan;
                }
            }
        }
        if let Some(r) = offender {
            for c in 0..cols {
                let v = m.get(r, c).clone();
                m.add_to(top, c, &v);
            }
            continue; // re-eliminate this block
        }
        factors.push(m.get(top, top).abs());
        top += 1;
    }
    factors
}

pub fn rank(matrix: &IntMatrix) -> usize {
    smith_invariant_factors(matrix).len()
}

/// The chain complex of a valid closed graph: ordered d-bubble bases and
/// integer boundary matrices.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub dimension: usize,
    /// `bases[d]` lists the d-bubbles, species in lexicographic color-set
    /// order, then by component.
    pub bases: Vec<Vec<Bubble>>,
    /// `boundaries[d]` is the matrix of the d-th boundary operator; rows
    /// index the (d-1)-basis (empty for d = 0), columns the d-basis.
    pub boundaries: Vec<IntMatrix>,
}

fn basis(graph: &ColoredGraph, d: usize) -> Vec<Bubble> {
    let mut out = Vec::new();
    for colors in combinations(graph.dimension() + 1, d) {
        out.extend(enumerate_bubbles(graph, &colors));
    }
    out
}

/// Boundary matrix in the given degree; rows index the (d-1)-bubbles.
pub fn boundary_matrix(graph: &ColoredGraph, d: usize) -> Result<IntMatrix, GraphError> {
    if d > graph.dimension() {
        return Err(GraphError::Parse(format!(
            "homology degree {d} out of range for dimension {}",
            graph.dimension()
        )));
    }
    let cols_basis = basis(graph, d);
    if d == 0 {
        return Ok(IntMatrix::zero(0, cols_basis.len()));
    }
    let rows_basis = basis(graph, d - 1);
    // Row lookup: species colors -> position of its first component.
    let mut row_of = std::collections::BTreeMap::new();
    for (idx, b) in rows_basis.iter().enumerate() {
        if b.component == 0 {
            row_of.insert(b.colors.clone(), idx);
        }
    }
    let mut m = IntMatrix::zero(rows_basis.len(), cols_basis.len());
    for (col, b) in cols_basis.iter().enumerate() {
        for q in 0..d {
            let sign = if q % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let mut sub_colors = b.colors.clone();
            sub_colors.remove(q);
            let base = row_of[&sub_colors];
            // (d-1)-bubbles of this species contained in b: contiguous in
            // the basis starting at `base`, filtered by vertex inclusion.
            let mut idx = base;
            while idx < rows_basis.len() && rows_basis[idx].colors == sub_colors {
                let sub = &rows_basis[idx];
                if sub.vertex_rows.iter().all(|&r| b.contains_row(r)) {
                    m.add_to(idx, col, &sign);
                }
                idx += 1;
            }
        }
    }
    // d = 1 orientation: an edge bounds to v - v-bar; the generic alternating
    // sum gives +1 on both endpoints, so fix the sign on negative vertices.
    if d == 1 {
        for (row, b) in rows_basis.iter().enumerate() {
            let is_negative = b.vertex_rows[0] >= graph.positive_count();
            if is_negative {
                for col in 0..m.cols {
                    let v = -m.get(row, col).clone();
                    m.set(row, col, v);
                }
            }
        }
    }
    Ok(m)
}

pub fn chain_complex(graph: &ColoredGraph) -> Result<ChainComplex, GraphError> {
    let dim = graph.dimension();
    let mut bases = Vec::new();
    let mut boundaries = Vec::new();
    for d in 0..=dim {
        bases.push(basis(graph, d));
        boundaries.push(boundary_matrix(graph, d)?);
    }
    Ok(ChainComplex { dimension: dim, bases, boundaries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
}

/// Exact integer homology in every degree.
pub fn homology(graph: &ColoredGraph) -> Result<Vec<HomologyGroup>, GraphError> {
    let complex = chain_complex(graph)?;
    let dim = complex.dimension;
    let mut out = Vec::new();
    for d in 0..=dim {
        let n_d = complex.bases[d].len();
        let rank_d = rank(&complex.boundaries[d]);
        let (rank_up, torsion) = if d < dim {
            let factors = smith_invariant_factors(&complex.boundaries[d + 1]);
            let torsion: Vec<BigInt> =
                factors.iter().filter(|f| **f > BigInt::one()).cloned().collect();
            (factors.len(), torsion)
        } else {
            (0, Vec::new())
        };
        out.push(HomologyGroup {
            degree: d,
            betti: n_d - rank_d - rank_up,
            torsion,
        });
    }
    Ok(out)
}

/// Structured-text homology report.
pub fn homology_report(groups: &[HomologyGroup]) -> String {
    let mut out = String::new();
    for g in groups {
        let torsion = if g.torsion.is_empty() {
            "-".to_string()
        } else {
            g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
        };
        out.push_str(&format!("H_{} betti {} torsion {}\n", g.degree, g.betti, torsion));
    }
    out
}

/// A finite presentation of the fundamental group: one generator per edge
/// off a spanning tree, one relator per 2-bubble.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    /// Edge index of each generator.
    pub generators: Vec<usize>,
    /// Relators as words: (generator position, exponent +-1).
    pub relators: Vec<Vec<(usize, i8)>>,
}

/// Presentation from a breadth-first spanning tree rooted at the first
/// positive vertex, built over canonical edge order. For D = 1 there are
/// no 2-bubbles and the group is free.
pub fn fundamental_group_presentation(graph: &ColoredGraph) -> Result<GroupPresentation, GraphError> {
    let report = graph.validate();
    if !report.is_valid() {
        return Err(GraphError::Invalid(report));
    }
    let n = graph.vertex_count();
    let mut in_tree = vec![false; graph.edges().len()];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    // Adjacency in canonical edge order.
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in graph.edges().iter().enumerate() {
        incident[e.positive].push(i);
        incident[graph.positive_count() + e.negative].push(i);
    }
    while let Some(u) = queue.pop_front() {
        for &i in &incident[u] {
            let e = &graph.edges()[i];
            let other = if u < graph.positive_count() {
                graph.positive_count() + e.negative
            } else {
                e.positive
            };
            if !seen[other] {
                seen[other] = true;
                in_tree[i] = true;
                queue.push_back(other);
            }
        }
    }

    let generators: Vec<usize> =
        (0..graph.edges().len()).filter(|&i| !in_tree[i]).collect();
    let gen_pos: std::collections::BTreeMap<usize, usize> =
        generators.iter().enumerate().map(|(p, &e)| (e, p)).collect();

    let mut relators = Vec::new();
    if graph.dimension() >= 2 {
        let incidence = graph.incidence();
        for pair in combinations(graph.dimension() + 1, 2) {
            let (i, j) = (pair[0], pair[1]);
            for b in enumerate_bubbles(graph, &pair) {
                // Walk the cycle from its smallest vertex, color i first.
                let start_row = b.vertex_rows[0];
                let start = graph.vertex_of_row(start_row);
                let mut word = Vec::new();
                let mut at = start;
                let mut color = i;
                loop {
                    let edge = incidence[graph.row(at)][color];
                    let e = &graph.edges()[edge];
                    // Positive-to-negative traversal carries exponent +1.
                    let exponent: i8 = if at.sign == Sign::Positive { 1 } else { -1 };
                    if let Some(&p) = gen_pos.get(&edge) {
                        word.push((p, exponent));
                    }
                    at = match at.sign {
                        Sign::Positive => Vertex::negative(e.negative),
                        Sign::Negative => Vertex::positive(e.positive),
                    };
                    color = if color == i { j } else { i };
                    if at == start && color == i {
                        break;
                    }
                }
                relators.push(word);
            }
        }
    }
    Ok(GroupPresentation { generators, relators })
}

/// Abelianization of a presentation: free rank and torsion coefficients.
pub fn abelianization(p: &GroupPresentation) -> (usize, Vec<BigInt>) {
    let mut m = IntMatrix::zero(p.relators.len(), p.generators.len());
    for (r, word) in p.relators.iter().enumerate() {
        for &(g, e) in word {
            m.add_to(r, g, &BigInt::from(e));
        }
    }
    let factors = smith_invariant_factors(&m);
    let torsion: Vec<BigInt> =
        factors.iter().filter(|f| **f > BigInt::one()).cloned().collect();
    (p.generators.len() - factors.len(), torsion)
}
