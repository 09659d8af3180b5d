//! Computational toolkit for `(D+1)`-colored graphs: bubble topology and
//! homology, dipole rewriting to core graphs, jacket genera and the degree,
//! the bubble Lie algebra, and exact plus Monte-Carlo analysis of the
//! melonic continuum limit.

pub mod algebra;
pub mod bubbles;
pub(crate) mod combinatorics;
pub mod corpus;
pub mod dimensions;
pub mod dipoles;
pub mod graph;
pub mod homology;
pub mod jackets;
pub mod melonic;
pub mod series;

pub use graph::{ColoredGraph, Edge, GraphError, GraphKind, Sign, ValidationReport, Vertex};
