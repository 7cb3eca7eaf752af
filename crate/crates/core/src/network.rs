//! Typed directed networks with a known vertex partition.
//!
//! Vertices, subgraphs and clusters are 0-indexed in memory. Edge type
//! codes keep their external meaning: `0` is "no edge", `1..=C` are types.

use std::fmt;

use ndarray::Array2;

use crate::error::{Result, RsmError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    /// Type code in `1..=C`.
    pub edge_type: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TypeOutOfRange { src: usize, dst: usize, code: u32 },
    SubgraphLabelOutOfRange { vertex: usize, label: usize },
    Shape(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TypeOutOfRange { src, dst, code } => write!(
                f,
                "type out of range: edge ({}, {}) has type {}",
                src + 1,
                dst + 1,
                code
            ),
            Violation::SubgraphLabelOutOfRange { vertex, label } => write!(
                f,
                "subgraph label out of range: vertex {} has subgraph {}",
                vertex + 1,
                label + 1
            ),
            Violation::Shape(msg) => write!(f, "shape: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    EmptySubgraph(usize),
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::EmptySubgraph(s) => write!(f, "subgraph {} has no vertices", s + 1),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<Vec<Warning>> {
        if self.violations.is_empty() {
            Ok(self.warnings)
        } else {
            let msg = self
                .violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            Err(RsmError::InvalidNetwork(msg))
        }
    }
}

/// Dense typed adjacency matrix plus the subgraph of every vertex.
///
/// Out- and in-adjacency lists are derived once at construction; the
/// value is immutable afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedNetwork {
    n_types: usize,
    n_subgraphs: usize,
    edge_types: Array2<u32>,
    subgraph_of: Vec<usize>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<(usize, u32)>>,
    in_adj: Vec<Vec<(usize, u32)>>,
}

impl TypedNetwork {
    /// Builds and validates a network. Empty subgraphs are allowed.
    pub fn new(
        n_types: usize,
        n_subgraphs: usize,
        edge_types: Array2<u32>,
        subgraph_of: Vec<usize>,
    ) -> Result<Self> {
        let net = Self::new_unchecked(n_types, n_subgraphs, edge_types, subgraph_of);
        validate_network(&net).into_result()?;
        Ok(net)
    }

    /// Builds a network without range checks; use [`validate_network`]
    /// before handing it to inference.
    pub fn new_unchecked(
        n_types: usize,
        n_subgraphs: usize,
        edge_types: Array2<u32>,
        subgraph_of: Vec<usize>,
    ) -> Self {
        let (rows, cols) = edge_types.dim();
        let mut edges = Vec::new();
        let mut out_adj = vec![Vec::new(); rows];
        let mut in_adj = vec![Vec::new(); cols];
        for ((i, j), &code) in edge_types.indexed_iter() {
            if i != j && code != 0 {
                edges.push(Edge {
                    src: i,
                    dst: j,
                    edge_type: code,
                });
                out_adj[i].push((j, code));
                in_adj[j].push((i, code));
            }
        }
        Self {
            n_types,
            n_subgraphs,
            edge_types,
            subgraph_of,
            edges,
            out_adj,
            in_adj,
        }
    }

    /// Builds a network from 0-indexed edges. Later duplicates overwrite
    /// earlier ones.
    pub fn from_edges(
        n_vertices: usize,
        n_types: usize,
        n_subgraphs: usize,
        edges: impl IntoIterator<Item = Edge>,
        subgraph_of: Vec<usize>,
    ) -> Result<Self> {
        let mut m = Array2::zeros((n_vertices, n_vertices));
        for e in edges {
            if e.src >= n_vertices || e.dst >= n_vertices {
                return Err(RsmError::InvalidNetwork(format!(
                    "edge ({}, {}) outside 1..={n_vertices}",
                    e.src + 1,
                    e.dst + 1
                )));
            }
            m[[e.src, e.dst]] = e.edge_type;
        }
        Self::new(n_types, n_subgraphs, m, subgraph_of)
    }

    pub fn n_vertices(&self) -> usize {
        self.subgraph_of.len()
    }

    pub fn n_types(&self) -> usize {
        self.n_types
    }

    pub fn n_subgraphs(&self) -> usize {
        self.n_subgraphs
    }

    /// Type code of `i -> j`; the diagonal always reads as 0.
    #[inline]
    pub fn edge_type(&self, i: usize, j: usize) -> u32 {
        if i == j {
            0
        } else {
            self.edge_types[[i, j]]
        }
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edge_type(i, j) != 0
    }

    pub fn edge_types(&self) -> &Array2<u32> {
        &self.edge_types
    }

    #[inline]
    pub fn subgraph_of(&self, i: usize) -> usize {
        self.subgraph_of[i]
    }

    pub fn subgraph_labels(&self) -> &[usize] {
        &self.subgraph_of
    }

    /// Present edges in row-major order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// `(dst, type)` of the edges leaving `i`.
    pub fn out_edges(&self, i: usize) -> &[(usize, u32)] {
        &self.out_adj[i]
    }

    /// `(src, type)` of the edges entering `i`.
    pub fn in_edges(&self, i: usize) -> &[(usize, u32)] {
        &self.in_adj[i]
    }

    pub fn subgraph_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_subgraphs];
        for &s in &self.subgraph_of {
            if s < self.n_subgraphs {
                sizes[s] += 1;
            }
        }
        sizes
    }

    /// Number of ordered pairs `i != j` with `i` in `r` and `j` in `s`.
    pub fn pair_counts(&self) -> Array2<usize> {
        let sizes = self.subgraph_sizes();
        Array2::from_shape_fn((self.n_subgraphs, self.n_subgraphs), |(r, s)| {
            if r == s {
                sizes[r] * sizes[r].saturating_sub(1)
            } else {
                sizes[r] * sizes[s]
            }
        })
    }

    /// Same network with a different type alphabet and edge matrix.
    pub(crate) fn with_edge_types(&self, n_types: usize, edge_types: Array2<u32>) -> Self {
        Self::new_unchecked(
            n_types,
            self.n_subgraphs,
            edge_types,
            self.subgraph_of.clone(),
        )
    }
}

/// Reports every invariant violation of `net`; empty subgraphs are warnings.
pub fn validate_network(net: &TypedNetwork) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = net.n_vertices();
    let (rows, cols) = net.edge_types.dim();
    if rows != n || cols != n {
        report.violations.push(Violation::Shape(format!(
            "edge matrix is {rows}x{cols} but {n} subgraph labels were given"
        )));
        return report;
    }
    if net.n_types == 0 {
        report
            .violations
            .push(Violation::Shape("C must be >= 1".into()));
    }
    if net.n_subgraphs == 0 {
        report
            .violations
            .push(Violation::Shape("S must be >= 1".into()));
    }
    for ((i, j), &code) in net.edge_types.indexed_iter() {
        if i != j && code as usize > net.n_types {
            report.violations.push(Violation::TypeOutOfRange {
                src: i,
                dst: j,
                code,
            });
        }
    }
    for (vertex, &label) in net.subgraph_of.iter().enumerate() {
        if label >= net.n_subgraphs {
            report
                .violations
                .push(Violation::SubgraphLabelOutOfRange { vertex, label });
        }
    }
    for (s, size) in net.subgraph_sizes().into_iter().enumerate() {
        if size == 0 {
            report.warnings.push(Warning::EmptySubgraph(s));
        }
    }
    report
}

/// Binary presence matrix `A`, with a zero diagonal.
pub fn presence_matrix(net: &TypedNetwork) -> Array2<u8> {
    let n = net.n_vertices();
    Array2::from_shape_fn((n, n), |(i, j)| u8::from(net.has_edge(i, j)))
}

/// Number of free parameters of the model: `S² + K²C + SK`.
pub fn rsm_param_count(n_subgraphs: usize, n_clusters: usize, n_types: usize) -> usize {
    n_subgraphs * n_subgraphs + n_clusters * n_clusters * n_types + n_subgraphs * n_clusters
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    fn two_vertex(code: u32, c: usize, s: usize, labels: Vec<usize>) -> TypedNetwork {
        TypedNetwork::new_unchecked(c, s, array![[0, code], [0, 0]], labels)
    }

    #[test]
    fn minimal_network_is_valid() {
        let report = validate_network(&two_vertex(1, 1, 1, vec![0, 0]));
        assert!(report.is_ok());
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn type_out_of_range() {
        let report = validate_network(&two_vertex(2, 1, 1, vec![0, 0]));
        assert_eq!(
            report.violations,
            vec![Violation::TypeOutOfRange {
                src: 0,
                dst: 1,
                code: 2
            }]
        );
        assert!(report.violations[0]
            .to_string()
            .starts_with("type out of range"));
    }

    #[test]
    fn subgraph_label_out_of_range() {
        // external labels (1, 3) with S = 2
        let report = validate_network(&two_vertex(1, 1, 2, vec![0, 2]));
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0]
            .to_string()
            .starts_with("subgraph label out of range"));
        assert!(TypedNetwork::new(1, 2, array![[0, 1], [0, 0]], vec![0, 2]).is_err());
    }

    #[test]
    fn empty_subgraph_is_only_a_warning() {
        let report = validate_network(&two_vertex(1, 1, 3, vec![0, 0]));
        assert!(report.is_ok());
        assert_eq!(
            report.warnings,
            vec![Warning::EmptySubgraph(1), Warning::EmptySubgraph(2)]
        );
    }

    #[test]
    fn diagonal_is_ignored() {
        let net = TypedNetwork::new(1, 1, array![[7, 1], [0, 9]], vec![0, 0]).unwrap();
        assert_eq!(net.edge_type(0, 0), 0);
        assert_eq!(net.n_edges(), 1);
        assert_eq!(presence_matrix(&net), array![[0, 1], [0, 0]]);
    }

    #[test]
    fn presence_examples() {
        let empty = TypedNetwork::new(3, 1, Array2::zeros((3, 3)), vec![0; 3]).unwrap();
        assert_eq!(presence_matrix(&empty), Array2::<u8>::zeros((3, 3)));

        let net = two_vertex(3, 3, 1, vec![0, 0]);
        let a = presence_matrix(&net);
        assert_eq!(a[[0, 1]], 1);
        assert_eq!(a[[1, 0]], 0);
    }

    #[test]
    fn param_count_examples() {
        assert_eq!(rsm_param_count(6, 6, 4), 216);
        assert_eq!(rsm_param_count(1, 1, 1), 3);
        assert_eq!(rsm_param_count(2, 3, 3), 37);
    }

    #[test]
    fn pair_counts_exclude_self_pairs() {
        let net = TypedNetwork::new(1, 2, Array2::zeros((5, 5)), vec![0, 0, 0, 1, 1]).unwrap();
        assert_eq!(net.pair_counts(), array![[6, 6], [6, 2]]);
    }

    proptest! {
        #[test]
        fn presence_ignores_type_codes(
            codes in proptest::collection::vec(0u32..4, 36),
            remap in proptest::collection::vec(1u32..4, 4),
        ) {
            let m = Array2::from_shape_vec((6, 6), codes).unwrap();
            let retyped = m.mapv(|c| if c == 0 { 0 } else { remap[c as usize] });
            let a = TypedNetwork::new(3, 1, m, vec![0; 6]).unwrap();
            let b = TypedNetwork::new(3, 1, retyped, vec![0; 6]).unwrap();
            prop_assert_eq!(presence_matrix(&a), presence_matrix(&b));
        }

        #[test]
        fn param_count_strictly_increasing(s in 1usize..20, k in 1usize..20, c in 1usize..20) {
            let base = rsm_param_count(s, k, c);
            prop_assert!(rsm_param_count(s + 1, k, c) > base);
            prop_assert!(rsm_param_count(s, k + 1, c) > base);
            prop_assert!(rsm_param_count(s, k, c + 1) > base);
        }
    }
}
