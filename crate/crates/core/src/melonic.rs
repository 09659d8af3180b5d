//! Rooted melonic graphs and their tree encoding.
//!
//! A rooted melonic graph is a melonic closed graph with one marked cut
//! edge of color 0; its positive endpoint is the root. Such graphs are in
//! bijection with colored `(D+1)`-ary trees: each node is an elementary
//! melon insertion, the child in slot `c` is the melon inserted on the
//! active edge of color `c` at the node's negative vertex, and the root
//! node is the melon carrying the marked edge. Words, depths, the contour
//! walk, and the ball metric below all operate on this tree picture.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::bubbles::enumerate_bubbles;
use crate::graph::{Color, ColoredGraph, Edge, GraphError, GraphKind};
use crate::jackets;

#[derive(Debug, Error)]
pub enum MelonError {
    #[error("graph is not melonic: degree {degree}")]
    NotMelonic { degree: usize },
    #[error("not a rooted melonic presentation: {0}")]
    Shape(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One elementary melon in the tree encoding. The child in `slots[c]`
/// (if any) has color `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MelonNode {
    pub color: Color,
    pub slots: Vec<Option<usize>>,
    /// `(parent index, slot)`; `None` only for the root.
    pub parent: Option<(usize, Color)>,
}

/// A colored rooted `(D+1)`-ary tree; node 0 is the root and has color 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MelonTree {
    pub dimension: usize,
    pub nodes: Vec<MelonNode>,
}

impl MelonTree {
    /// The single-node tree (the cut supermelon).
    pub fn trivial(dimension: usize) -> Self {
        MelonTree {
            dimension,
            nodes: vec![MelonNode {
                color: 0,
                slots: vec![None; dimension + 1],
                parent: None,
            }],
        }
    }

    /// Number of melons, i.e. half the graph order.
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Distance from the root in the tree.
    pub fn node_depth(&self, node: usize) -> usize {
        let mut d = 0;
        let mut v = node;
        while let Some((p, _)) = self.nodes[v].parent {
            v = p;
            d += 1;
        }
        d
    }

    /// The word of a node: the leading root color 0 followed by the colors
    /// of the nodes on the path from the root's child down to the node.
    /// Since the child in slot `c` has color `c`, words identify nodes.
    pub fn word_of(&self, node: usize) -> Vec<Color> {
        let mut colors = Vec::new();
        let mut v = node;
        while let Some((p, _)) = self.nodes[v].parent {
            colors.push(self.nodes[v].color);
            v = p;
        }
        colors.push(0);
        colors.reverse();
        colors
    }

    /// Internal/leaf flags in preorder (slot order 0..=D): a canonical,
    /// structure-complete encoding used for equality tests.
    pub fn preorder_code(&self) -> Vec<bool> {
        let mut code = Vec::new();
        let mut stack = vec![Some(0usize)];
        while let Some(entry) = stack.pop() {
            match entry {
                None => code.push(false),
                Some(v) => {
                    code.push(true);
                    for slot in self.nodes[v].slots.iter().rev() {
                        stack.push(*slot);
                    }
                }
            }
        }
        code
    }
}

/// Exact count of melonic trees with `p` melons in dimension `d`:
/// `binom((d+1)p + 1, p) / ((d+1)p + 1)`.
pub fn count_melonic(d: usize, p: usize) -> BigUint {
    let n = (d + 1) * p + 1;
    num_integer::binomial(BigUint::from(n), BigUint::from(p)) / BigUint::from(n)
}

/// Counts for `p = 0..=p_max` from the fixed point of `G = 1 + z G^{d+1}`,
/// an independent cross-check of the closed form.
pub fn count_table(d: usize, p_max: usize) -> Vec<BigUint> {
    let len = p_max + 1;
    let mut g = vec![BigUint::zero(); len];
    g[0] = BigUint::one();
    for _ in 0..len {
        // pow = G^{d+1} truncated
        let mut pow = vec![BigUint::zero(); len];
        pow[0] = BigUint::one();
        for _ in 0..=d {
            let mut next = vec![BigUint::zero(); len];
            for i in 0..len {
                if pow[i].is_zero() {
                    continue;
                }
                for j in 0..len - i {
                    let term = &pow[i] * &g[j];
                    next[i + j] += term;
                }
            }
            pow = next;
        }
        let mut updated = vec![BigUint::zero(); len];
        updated[0] = BigUint::one();
        for p in 1..len {
            updated[p] = pow[p - 1].clone();
        }
        g = updated;
    }
    g
}

/// Decode a preorder internal/leaf sequence into a tree. The sequence must
/// be a valid Łukasiewicz path: internals step `+d`, leaves `-1`, partial
/// sums stay non-negative until the final `-1`.
fn decode_preorder(d: usize, seq: &[bool]) -> MelonTree {
    assert!(seq[0], "preorder sequence must start with an internal node");
    let mut tree = MelonTree::trivial(d);
    // Stack of (node, next slot to fill).
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    let mut pos = 1;
    while let Some(&(node, c)) = stack.last() {
        if c > d {
            stack.pop();
            continue;
        }
        stack.last_mut().unwrap().1 += 1;
        if seq[pos] {
            let id = tree.nodes.len();
            tree.nodes.push(MelonNode {
                color: c,
                slots: vec![None; d + 1],
                parent: Some((node, c)),
            });
            tree.nodes[node].slots[c] = Some(id);
            stack.push((id, 0));
        }
        pos += 1;
    }
    assert_eq!(pos, seq.len(), "preorder sequence has trailing entries");
    tree
}

fn lukasiewicz_valid(d: usize, seq: &[bool]) -> bool {
    let mut sum: i64 = 0;
    for (i, &internal) in seq.iter().enumerate() {
        sum += if internal { d as i64 } else { -1 };
        if sum < 0 && i + 1 < seq.len() {
            return false;
        }
    }
    sum == -1
}

/// All melonic trees with exactly `p` melons, via valid preorder sequences.
pub fn enumerate_trees(d: usize, p: usize) -> Vec<MelonTree> {
    assert!(p >= 1);
    let n = (d + 1) * p + 1;
    let mut out = Vec::new();
    for subset in crate::combinatorics::combinations(n, p) {
        let mut seq = vec![false; n];
        for i in subset {
            seq[i] = true;
        }
        if lukasiewicz_valid(d, &seq) {
            out.push(decode_preorder(d, &seq));
        }
    }
    out
}

/// Uniform random melonic tree with `p` melons, by the cycle lemma: mark
/// `p` internal positions among `(d+1)p + 1`, then take the unique rotation
/// that is a valid Łukasiewicz path.
pub fn sample_uniform<R: Rng + ?Sized>(d: usize, p: usize, rng: &mut R) -> MelonTree {
    assert!(p >= 1);
    let n = (d + 1) * p + 1;
    let mut marks = vec![false; n];
    for i in rand::seq::index::sample(rng, n, p) {
        marks[i] = true;
    }
    // The valid rotation starts at the first position where the running sum
    // attains its minimum.
    let step = |internal: bool| if internal { d as i64 } else { -1 };
    let mut sum = 0i64;
    let mut min = i64::MAX;
    let mut start = 0;
    for (i, &m) in marks.iter().enumerate() {
        sum += step(m);
        if sum < min {
            min = sum;
            start = i + 1;
        }
    }
    let rotated: Vec<bool> = (0..n).map(|i| marks[(start + i) % n]).collect();
    debug_assert!(lukasiewicz_valid(d, &rotated));
    decode_preorder(d, &rotated)
}

/// Build the rooted melonic graph of a tree. Melon `k` of the tree becomes
/// the vertex pair `(positive k, negative k)`; the marked cut edge is the
/// color-0 edge at positive vertex 0 (the root).
pub fn tree_to_graph(tree: &MelonTree) -> ColoredGraph {
    let d = tree.dimension;
    let n = tree.nodes.len();
    // Neighbor tables: pos_nb[v][c] = negative neighbor of positive v.
    let mut pos_nb = vec![vec![usize::MAX; d + 1]; n];
    let mut neg_nb = vec![vec![usize::MAX; d + 1]; n];
    for c in 0..=d {
        pos_nb[0][c] = 0;
        neg_nb[0][c] = 0;
    }
    // Insert melons parent-first. Inserting melon k of color c on the
    // parent's active edge (x, b_parent, c) replaces it with (x, b_k, c)
    // and (w_k, b_parent, c), plus the shared colors of the new pair.
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        if let Some((parent, c)) = tree.nodes[v].parent {
            let x = neg_nb[parent][c];
            for c2 in 0..=d {
                if c2 != c {
                    pos_nb[v][c2] = v;
                    neg_nb[v][c2] = v;
                }
            }
            pos_nb[x][c] = v;
            neg_nb[v][c] = x;
            pos_nb[v][c] = parent;
            neg_nb[parent][c] = v;
        }
        for slot in tree.nodes[v].slots.iter().rev() {
            if let Some(&child) = slot.as_ref() {
                stack.push(child);
            }
        }
    }
    let mut edges = Vec::with_capacity(n * (d + 1));
    for v in 0..n {
        for c in 0..=d {
            edges.push(Edge::new(v, pos_nb[v][c], c));
        }
    }
    edges.sort();
    let root_edge = edges
        .iter()
        .position(|e| e.color == 0 && e.positive == 0)
        .expect("root has a color-0 edge");
    ColoredGraph::open(d, n, edges, [root_edge])
}

/// Invert [`tree_to_graph`]. Any non-root pair `(w, b)` sharing all colors
/// but `i` is an elementary melon sitting on an edge `(y, u-bar, i)` and
/// can be excised, restoring that edge. Replaying the excisions in reverse
/// is a sequence of edge insertions: a melon re-inserted where the parent's
/// slot `i` is already occupied splices in between the parent and the
/// occupant. Fails with the graph's degree if peeling gets stuck.
pub fn graph_to_tree(graph: &ColoredGraph) -> Result<MelonTree, MelonError> {
    let report = graph.validate();
    if !report.is_valid() {
        return Err(GraphError::Invalid(report).into());
    }
    if graph.kind() != GraphKind::Open {
        return Err(MelonError::Shape("expected an open graph".into()));
    }
    let cuts: Vec<usize> = graph.cut_edges().collect();
    if cuts.len() != 1 {
        return Err(MelonError::Shape(format!(
            "expected exactly one cut edge, found {}",
            cuts.len()
        )));
    }
    let root_edge = graph.edges()[cuts[0]];
    if root_edge.color != 0 {
        return Err(MelonError::Shape(format!(
            "cut edge must have color 0, found {}",
            root_edge.color
        )));
    }
    let d = graph.dimension();
    let n = graph.positive_count();
    let a = root_edge.positive;

    let mut pos_nb = vec![vec![usize::MAX; d + 1]; n];
    let mut neg_nb = vec![vec![usize::MAX; d + 1]; n];
    for e in graph.edges() {
        pos_nb[e.positive][e.color] = e.negative;
        neg_nb[e.negative][e.color] = e.positive;
    }
    let mut alive = vec![true; n];

    // For a live positive w, its D-sharing partner and missing color.
    let missing_pair = |pos_nb: &Vec<Vec<usize>>, w: usize| -> Option<(usize, Color)> {
        let first = pos_nb[w][0];
        let (candidate, missing_guess) = if pos_nb[w][1] == first {
            (first, None)
        } else if (2..=d).all(|c| pos_nb[w][c] == first) {
            // colors 0 and 2..=d agree; color 1 differs
            (first, Some(1))
        } else {
            (pos_nb[w][1], Some(0))
        };
        let mut missing = missing_guess;
        for c in 0..=d {
            if pos_nb[w][c] != candidate {
                match missing {
                    Some(m) if m == c => {}
                    Some(_) => return None,
                    None => missing = Some(c),
                }
            }
        }
        missing.map(|m| (candidate, m))
    };

    // Peel order records: (own black, missing color, parent black).
    let mut records: Vec<(usize, Color, usize)> = Vec::new();
    let mut remaining = n;
    while remaining > 1 {
        let mut peeled = false;
        for w in 0..n {
            if !alive[w] || w == a {
                continue;
            }
            let Some((b, i)) = missing_pair(&pos_nb, w) else {
                continue;
            };
            // Excise the melon and restore the edge (y, u-bar, i) it sat on.
            let y = neg_nb[b][i];
            let ubar = pos_nb[w][i];
            pos_nb[y][i] = ubar;
            neg_nb[ubar][i] = y;
            alive[w] = false;
            records.push((b, i, ubar));
            remaining -= 1;
            peeled = true;
            break;
        }
        if !peeled {
            let closed = graph.with_cuts(std::iter::empty::<usize>());
            return Err(MelonError::NotMelonic { degree: jackets::degree(&closed) });
        }
    }
    // The survivor is the root melon: its white must be the root and the
    // pair must share every color.
    let survivor_black = pos_nb[a][0];
    for c in 0..=d {
        if pos_nb[a][c] != survivor_black {
            return Err(MelonError::Shape(
                "peeling left a non-supermelon core".into(),
            ));
        }
    }

    let mut tree = MelonTree::trivial(d);
    let mut node_of_black = vec![usize::MAX; n];
    node_of_black[survivor_black] = 0;
    for &(b, i, ubar) in records.iter().rev() {
        let parent = node_of_black[ubar];
        debug_assert_ne!(parent, usize::MAX, "parent excised before child");
        let id = tree.nodes.len();
        tree.nodes.push(MelonNode {
            color: i,
            slots: vec![None; d + 1],
            parent: Some((parent, i)),
        });
        // Inserting on an occupied slot pushes the occupant one level down:
        // the restored edge was the occupant's link to its parent.
        if let Some(displaced) = tree.nodes[parent].slots[i] {
            tree.nodes[id].slots[i] = Some(displaced);
            tree.nodes[displaced].parent = Some((id, i));
        }
        tree.nodes[parent].slots[i] = Some(id);
        node_of_black[b] = id;
    }
    Ok(tree)
}

/// Nesting depth of a word: its letter count after the leading 0.
pub fn tree_depth(word: &[Color]) -> usize {
    word.len() - 1
}

/// Depth of a word `(0; u_1 ... u_n)`: the number of subwords in its
/// greedy division. The first subword is the maximal 0-free prefix; each
/// later subword grows until appending the next letter would make it
/// contain every letter of the alphabet, which instead starts a new one.
pub fn depth(word: &[Color], d: usize) -> usize {
    assert_eq!(word[0], 0, "words start with the root color 0");
    suffix_depth(&word[1..], d)
}

/// The same division applied to a bare letter sequence (a word suffix).
pub fn suffix_depth(body: &[Color], d: usize) -> usize {
    let mut count = 0;
    let mut i = 0;
    while i < body.len() && body[i] != 0 {
        i += 1;
    }
    if i > 0 {
        count += 1;
    }
    if i < body.len() {
        let full: u64 = (1 << (d + 1)) - 1;
        let mut mask: u64 = 0;
        while i < body.len() {
            let bit = 1u64 << body[i];
            if mask != 0 && (mask | bit) == full {
                count += 1;
                mask = bit;
            } else {
                mask |= bit;
            }
            i += 1;
        }
        count += 1;
    }
    count
}

/// The almost-sure limit of `depth / tree_depth` along a long uniformly
/// random word: `Lambda_Delta^{-1} = (d+1) sum_{r=0..d} (-1)^{d-r}
/// binom(d,r) r / (d+1-r)^2`.
pub fn lambda_delta(d: usize) -> BigRational {
    let mut inv = BigRational::zero();
    for r in 0..=d {
        let binom = num_integer::binomial(BigInt::from(d), BigInt::from(r));
        let denom = BigInt::from(((d + 1 - r) * (d + 1 - r)) as i64);
        let term = BigRational::new(binom * BigInt::from(r), denom);
        if (d - r) % 2 == 0 {
            inv += term;
        } else {
            inv -= term;
        }
    }
    inv *= BigRational::from_integer((d as i64 + 1).into());
    assert!(inv.is_positive());
    inv.recip()
}

/// Depth-based two-point distance estimate: split the words at their
/// longest common prefix (the word of the lowest common ancestor, since
/// slot and color coincide) and sum the suffix depths.
pub fn pair_distance_estimate(tree: &MelonTree, v1: usize, v2: usize) -> usize {
    let w1 = tree.word_of(v1);
    let w2 = tree.word_of(v2);
    let lcp = w1.iter().zip(&w2).take_while(|(a, b)| a == b).count();
    suffix_depth(&w1[lcp..], tree.dimension) + suffix_depth(&w2[lcp..], tree.dimension)
}

/// Distances between internal vertices of the melonic ball, computed on
/// the 1-skeleton of the dual complex: vertices are the D-bubbles of the
/// open graph, two being adjacent when they share a graph vertex (a
/// facet). The internal vertex of melon `k` (color `c`) is the bubble of
/// species `c-hat` containing the melon's negative vertex.
pub struct BallMetric {
    bubble_of_node: Vec<usize>,
    bubble_rows: Vec<Vec<usize>>,
    row_bubbles: Vec<Vec<usize>>,
}

impl BallMetric {
    pub fn new(tree: &MelonTree) -> Self {
        let graph = tree_to_graph(tree);
        let d = graph.dimension();
        let rows = graph.vertex_count();
        let mut bubble_rows: Vec<Vec<usize>> = Vec::new();
        let mut row_bubbles: Vec<Vec<usize>> = vec![Vec::new(); rows];
        // bubble id of the c-hat bubble containing each row, per species c
        let mut species_at = vec![vec![usize::MAX; rows]; d + 1];
        for c in 0..=d {
            let colors: Vec<Color> = (0..=d).filter(|&x| x != c).collect();
            for bubble in enumerate_bubbles(&graph, &colors) {
                let id = bubble_rows.len();
                for &row in &bubble.vertex_rows {
                    species_at[c][row] = id;
                    row_bubbles[row].push(id);
                }
                bubble_rows.push(bubble.vertex_rows);
            }
        }
        let p = graph.positive_count();
        let bubble_of_node = (0..tree.nodes.len())
            .map(|k| species_at[tree.nodes[k].color][p + k])
            .collect();
        BallMetric { bubble_of_node, bubble_rows, row_bubbles }
    }

    /// Skeleton distance between the internal vertices of two melons.
    pub fn distance(&self, node_a: usize, node_b: usize) -> usize {
        let source = self.bubble_of_node[node_a];
        let target = self.bubble_of_node[node_b];
        if source == target {
            return 0;
        }
        // Alternating BFS over bubbles and graph vertices; a bubble step
        // plus a vertex step is one skeleton edge.
        let mut dist_bubble = vec![usize::MAX; self.bubble_rows.len()];
        let mut dist_row = vec![usize::MAX; self.row_bubbles.len()];
        dist_bubble[source] = 0;
        let mut queue = VecDeque::new();
        queue.push_back((true, source));
        while let Some((is_bubble, x)) = queue.pop_front() {
            if is_bubble {
                if x == target {
                    return dist_bubble[x] / 2;
                }
                for &row in &self.bubble_rows[x] {
                    if dist_row[row] == usize::MAX {
                        dist_row[row] = dist_bubble[x] + 1;
                        queue.push_back((false, row));
                    }
                }
            } else {
                for &b in &self.row_bubbles[x] {
                    if dist_bubble[b] == usize::MAX {
                        dist_bubble[b] = dist_row[x] + 1;
                        queue.push_back((true, b));
                    }
                }
            }
        }
        unreachable!("dual complex of a ball is connected");
    }
}

/// Contour walk of the defoliated tree: `f(0) = f(2p) = 0` at the base,
/// and `f(i)` is one plus the tree depth of the node visited at step `i`.
/// Returns the heights and the node visited at each step (`usize::MAX` at
/// the base).
pub fn contour_walk(tree: &MelonTree) -> (Vec<usize>, Vec<usize>) {
    let mut f = vec![0usize];
    let mut station = vec![usize::MAX];
    // Explicit Euler tour: (node, height, next slot to descend).
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, 1, 0)];
    f.push(1);
    station.push(0);
    while let Some(&(node, h, slot)) = stack.last() {
        if slot < tree.nodes[node].slots.len() {
            stack.last_mut().unwrap().2 += 1;
            if let Some(child) = tree.nodes[node].slots[slot] {
                f.push(h + 1);
                station.push(child);
                stack.push((child, h + 1, 0));
            }
        } else {
            stack.pop();
            match stack.last() {
                Some(&(parent, ph, _)) => {
                    f.push(ph);
                    station.push(parent);
                }
                None => {
                    f.push(0);
                    station.push(usize::MAX);
                }
            }
        }
    }
    (f, station)
}

/// Distance read off the contour walk: `f(s) + f(t) - 2 min f` over the
/// intermediate interval.
pub fn walk_distance(f: &[usize], s: usize, t: usize) -> usize {
    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
    let m = f[lo..=hi].iter().min().copied().unwrap();
    f[s] + f[t] - 2 * m
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::dipoles;

    /// Chain tree whose branch colors spell the given word body.
    fn chain_tree(d: usize, body: &[Color]) -> MelonTree {
        let mut tree = MelonTree::trivial(d);
        let mut at = 0usize;
        for &c in body {
            let id = tree.nodes.len();
            tree.nodes.push(MelonNode {
                color: c,
                slots: vec![None; d + 1],
                parent: Some((at, c)),
            });
            tree.nodes[at].slots[c] = Some(id);
            at = id;
        }
        tree
    }

    fn tree_distance(tree: &MelonTree, u: usize, v: usize) -> usize {
        let (mut u, mut v) = (u, v);
        let (mut du, mut dv) = (tree.node_depth(u), tree.node_depth(v));
        let mut steps = 0;
        while du > dv {
            u = tree.nodes[u].parent.unwrap().0;
            du -= 1;
            steps += 1;
        }
        while dv > du {
            v = tree.nodes[v].parent.unwrap().0;
            dv -= 1;
            steps += 1;
        }
        while u != v {
            u = tree.nodes[u].parent.unwrap().0;
            v = tree.nodes[v].parent.unwrap().0;
            steps += 2;
        }
        steps
    }

    #[test]
    fn closed_form_counts() {
        let expect: [u64; 5] = [1, 1, 4, 22, 140];
        for (p, &e) in expect.iter().enumerate() {
            assert_eq!(count_melonic(3, p), BigUint::from(e), "p = {p}");
        }
        // Ternary case (d = 2): Fuss-Catalan 1, 1, 3, 12, 55, 273.
        let expect2: [u64; 6] = [1, 1, 3, 12, 55, 273];
        for (p, &e) in expect2.iter().enumerate() {
            assert_eq!(count_melonic(2, p), BigUint::from(e), "p = {p}");
        }
    }

    #[test]
    fn recurrence_agrees_with_closed_form() {
        for d in 2..=4 {
            let table = count_table(d, 12);
            for (p, value) in table.iter().enumerate() {
                assert_eq!(*value, count_melonic(d, p), "d = {d}, p = {p}");
            }
        }
    }

    #[test]
    fn enumeration_is_complete_and_injective_on_graphs() {
        for d in [2usize, 3] {
            for p in 1..=4 {
                let trees = enumerate_trees(d, p);
                assert_eq!(
                    BigUint::from(trees.len()),
                    count_melonic(d, p),
                    "d = {d}, p = {p}"
                );
                let mut codes = std::collections::BTreeSet::new();
                for tree in &trees {
                    assert!(codes.insert(tree.preorder_code()), "duplicate tree");
                    let graph = tree_to_graph(tree);
                    assert!(graph.is_valid());
                    // The graph round-trips to the same tree, so distinct
                    // trees give distinct rooted graphs.
                    let back = graph_to_tree(&graph).unwrap();
                    assert_eq!(back.preorder_code(), tree.preorder_code());
                }
            }
        }
    }

    #[test]
    fn sampled_graphs_are_melonic_spheres_in_the_making() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2usize, 3, 4] {
            for _ in 0..10 {
                let p = 1 + (rng.gen::<usize>() % 40);
                let tree = sample_uniform(d, p, &mut rng);
                let graph = tree_to_graph(&tree);
                assert!(graph.is_valid());
                let closed = graph.with_cuts(std::iter::empty::<usize>());
                assert_eq!(jackets::degree(&closed), 0);
                let (melonic, _) = dipoles::is_melonic(&closed);
                assert!(melonic);
                let back = graph_to_tree(&graph).unwrap();
                assert_eq!(back.preorder_code(), tree.preorder_code());
            }
        }
    }

    #[test]
    fn trivial_tree_is_the_cut_supermelon() {
        let tree = MelonTree::trivial(3);
        let graph = tree_to_graph(&tree);
        assert_eq!(graph.vertex_count(), 2);
        assert_eq!(graph.cut_edges().count(), 1);
        let back = graph_to_tree(&graph).unwrap();
        assert_eq!(back.preorder_code(), tree.preorder_code());
    }

    #[test]
    fn sampler_is_deterministic_per_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        let ta = sample_uniform(3, 50, &mut a);
        let tb = sample_uniform(3, 50, &mut b);
        assert_eq!(ta.preorder_code(), tb.preorder_code());
    }

    #[test]
    fn sampler_is_uniform_at_small_order() {
        // d = 3, p = 2: four trees, one per slot of the root.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let classes: Vec<Vec<bool>> =
            enumerate_trees(3, 2).iter().map(|t| t.preorder_code()).collect();
        assert_eq!(classes.len(), 4);
        let mut counts = vec![0usize; 4];
        let draws = 4000;
        for _ in 0..draws {
            let code = sample_uniform(3, 2, &mut rng).preorder_code();
            let k = classes.iter().position(|c| *c == code).unwrap();
            counts[k] += 1;
        }
        for (k, &c) in counts.iter().enumerate() {
            assert!(
                (850..=1150).contains(&c),
                "class {k} sampled {c} times out of {draws}"
            );
        }
    }

    #[test]
    fn non_melonic_rooted_graph_is_rejected_with_its_degree() {
        // Necklace with colors 0, 1 straight and 2, 3 crossed: degree 1.
        let edges = vec![
            Edge::new(0, 0, 0),
            Edge::new(1, 1, 0),
            Edge::new(0, 0, 1),
            Edge::new(1, 1, 1),
            Edge::new(0, 1, 2),
            Edge::new(1, 0, 2),
            Edge::new(0, 1, 3),
            Edge::new(1, 0, 3),
        ];
        let mut sorted = edges.clone();
        sorted.sort();
        let cut = sorted
            .iter()
            .position(|e| e.color == 0 && e.positive == 0)
            .unwrap();
        let graph = ColoredGraph::open(3, 2, edges, [cut]);
        assert!(graph.is_valid());
        match graph_to_tree(&graph) {
            Err(MelonError::NotMelonic { degree }) => assert_eq!(degree, 1),
            other => panic!("expected NotMelonic, got {other:?}"),
        }
    }

    #[test]
    fn depth_of_the_worked_word() {
        let word = vec![0, 1, 0, 1, 3, 2, 1, 2, 0, 3, 1, 2];
        assert_eq!(tree_depth(&word), 11);
        assert_eq!(depth(&word, 3), 4);
        // The division is (0)(1)(013)(2120)(312).
        assert_eq!(suffix_depth(&word[1..2], 3), 1);
        assert_eq!(suffix_depth(&[3, 1, 2], 3), 1);
    }

    #[test]
    fn depth_edge_cases() {
        assert_eq!(depth(&[0], 3), 0);
        assert_eq!(depth(&[0, 1], 3), 1);
        assert_eq!(depth(&[0, 0], 3), 1);
        assert_eq!(depth(&[0, 1, 2, 3], 3), 1);
        // Division (1)(012)(3): the completing letter opens a new subword.
        assert_eq!(depth(&[0, 1, 0, 1, 2, 3], 3), 3);
    }

    #[test]
    fn depth_grows_by_at_most_one_per_letter() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [2usize, 3] {
            let body: Vec<Color> =
                (0..400).map(|_| rng.gen::<usize>() % (d + 1)).collect();
            let mut prev = 0;
            for n in 0..=body.len() {
                let mut word = vec![0];
                word.extend_from_slice(&body[..n]);
                let lam = depth(&word, d);
                assert!(lam >= prev && lam <= prev + 1, "at n = {n}");
                assert!(lam <= tree_depth(&word));
                prev = lam;
            }
        }
    }

    #[test]
    fn depth_density_constants() {
        assert_eq!(
            lambda_delta(3),
            BigRational::new(BigInt::from(3), BigInt::from(22))
        );
        assert_eq!(
            lambda_delta(1),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn random_word_depth_matches_the_density() {
        let d = 3;
        let n = 200_000;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let body: Vec<Color> = (0..n).map(|_| rng.gen::<usize>() % (d + 1)).collect();
        let mut word = vec![0];
        word.extend(body);
        let ratio = depth(&word, d) as f64 / n as f64;
        let expect = 3.0 / 22.0;
        assert!(
            (ratio - expect).abs() < 0.02 * expect,
            "ratio {ratio} vs {expect}"
        );
    }

    #[test]
    fn ball_metric_on_small_chains() {
        // Root plus one transverse melon: adjacent internal vertices.
        let tree = chain_tree(3, &[1]);
        let metric = BallMetric::new(&tree);
        assert_eq!(metric.distance(0, 0), 0);
        assert_eq!(metric.distance(0, 1), 1);
        assert_eq!(pair_distance_estimate(&tree, 0, 1), 1);
    }

    #[test]
    fn depth_estimate_tracks_the_ball_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let tree = sample_uniform(3, 64, &mut rng);
            let metric = BallMetric::new(&tree);
            for _ in 0..4 {
                let a = rng.gen::<usize>() % tree.order();
                let b = rng.gen::<usize>() % tree.order();
                let exact = metric.distance(a, b) as i64;
                let estimate = pair_distance_estimate(&tree, a, b) as i64;
                assert!(
                    (exact - estimate).abs() <= 6,
                    "exact {exact} vs estimate {estimate}"
                );
            }
        }
    }

    #[test]
    fn contour_walk_shape_and_distances() {
        let trivial = MelonTree::trivial(3);
        let (f, station) = contour_walk(&trivial);
        assert_eq!(f, vec![0, 1, 0]);
        assert_eq!(station, vec![usize::MAX, 0, usize::MAX]);

        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let p = 2 + (rng.gen::<usize>() % 40);
            let tree = sample_uniform(3, p, &mut rng);
            let (f, station) = contour_walk(&tree);
            assert_eq!(f.len(), 2 * p + 1);
            assert_eq!(f[0], 0);
            assert_eq!(*f.last().unwrap(), 0);
            for _ in 0..6 {
                let s = 1 + rng.gen::<usize>() % (2 * p - 1);
                let t = 1 + rng.gen::<usize>() % (2 * p - 1);
                let expect = tree_distance(&tree, station[s], station[t]);
                assert_eq!(walk_distance(&f, s, t), expect);
            }
        }
    }

    #[test]
    fn contour_walk_worked_heights() {
        // Root with children in slots 1 and 2; the slot-1 child has its own
        // slot-3 child. Heights follow visit order.
        let mut tree = MelonTree::trivial(3);
        tree.nodes.push(MelonNode { color: 1, slots: vec![None; 4], parent: Some((0, 1)) });
        tree.nodes[0].slots[1] = Some(1);
        tree.nodes.push(MelonNode { color: 3, slots: vec![None; 4], parent: Some((1, 3)) });
        tree.nodes[1].slots[3] = Some(2);
        tree.nodes.push(MelonNode { color: 2, slots: vec![None; 4], parent: Some((0, 2)) });
        tree.nodes[0].slots[2] = Some(3);
        let (f, _) = contour_walk(&tree);
        assert_eq!(f, vec![0, 1, 2, 3, 2, 1, 2, 1, 0]);
        assert_eq!(walk_distance(&f, 3, 6), 3 + 2 - 2);
    }
}
