//! Finite directed multigraphs and the path/degree combinatorics that the
//! freeness verdicts reduce to.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references undeclared vertex `{vertex}`")]
    UnknownEdgeEndpoint { edge: String, vertex: String },
    #[error("infinite bundle references undeclared vertex `{0}`")]
    UnknownBundleEndpoint(String),
}

/// A natural number or `∞`. Used for edge multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedNat {
    Finite(u64),
    Infinite,
}

impl ExtendedNat {
    pub const ZERO: ExtendedNat = ExtendedNat::Finite(0);

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedNat::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedNat::Finite(n) => Some(n),
            ExtendedNat::Infinite => None,
        }
    }
}

impl Default for ExtendedNat {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for ExtendedNat {
    type Output = ExtendedNat;

    fn add(self, rhs: ExtendedNat) -> ExtendedNat {
        match (self, rhs) {
            (ExtendedNat::Finite(a), ExtendedNat::Finite(b)) => a
                .checked_add(b)
                .map_or(ExtendedNat::Infinite, ExtendedNat::Finite),
            _ => ExtendedNat::Infinite,
        }
    }
}

impl std::iter::Sum for ExtendedNat {
    fn sum<I: Iterator<Item = ExtendedNat>>(iter: I) -> ExtendedNat {
        iter.fold(ExtendedNat::ZERO, Add::add)
    }
}

impl fmt::Display for ExtendedNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNat::Finite(n) => write!(f, "{n}"),
            ExtendedNat::Infinite => f.write_str("inf"),
        }
    }
}

/// A subset of the vertices `0..universe` of some graph (or points of a
/// correspondence), stored as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    members: Vec<bool>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            members: vec![false; universe],
        }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet {
            members: vec![true; universe],
        }
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn insert(&mut self, v: usize) {
        self.members[v] = true;
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    /// Members in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn complement(&self) -> Self {
        VertexSet {
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        assert_eq!(
            self.universe(),
            other.universe(),
            "vertex sets over different universes"
        );
        VertexSet {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub range: usize,
}

/// A directed multigraph with finitely many vertices. Besides individual
/// edges it may carry infinite bundles: a pair `(u, v)` standing for
/// countably many parallel edges from `u` to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedMultigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    infinite_bundles: Vec<(usize, usize)>,
    vertex_index: HashMap<String, usize>,
}

impl DirectedMultigraph {
    /// Builds a graph from named vertices, `(id, source, range)` edges and
    /// `(source, range)` infinite bundles. Repeated bundles collapse.
    pub fn new<V, E, B>(vertices: V, edges: E, infinite_bundles: B) -> Result<Self, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
        B: IntoIterator<Item = (String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(GraphError::NoVertices);
        }
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }

        let mut seen_ids = HashSet::new();
        let mut built = Vec::new();
        for (id, src, dst) in edges {
            if !seen_ids.insert(id.clone()) {
                return Err(GraphError::DuplicateEdge(id));
            }
            let lookup = |name: &String| {
                vertex_index
                    .get(name)
                    .copied()
                    .ok_or_else(|| GraphError::UnknownEdgeEndpoint {
                        edge: id.clone(),
                        vertex: name.clone(),
                    })
            };
            let source = lookup(&src)?;
            let range = lookup(&dst)?;
            built.push(Edge { id, source, range });
        }

        let mut bundles = Vec::new();
        for (src, dst) in infinite_bundles {
            let lookup = |name: &String| {
                vertex_index
                    .get(name)
                    .copied()
                    .ok_or_else(|| GraphError::UnknownBundleEndpoint(name.clone()))
            };
            let pair = (lookup(&src)?, lookup(&dst)?);
            if !bundles.contains(&pair) {
                bundles.push(pair);
            }
        }

        Ok(DirectedMultigraph {
            vertices,
            edges: built,
            infinite_bundles: bundles,
            vertex_index,
        })
    }

    /// Index-based constructor: vertices are named `v0, v1, ...` and edges
    /// `e0, e1, ...` in the given order.
    pub fn from_indices(
        vertex_count: usize,
        edges: &[(usize, usize)],
        infinite_bundles: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let name = |v: usize| format!("v{v}");
        Self::new(
            (0..vertex_count).map(name),
            edges
                .iter()
                .enumerate()
                .map(|(i, &(s, r))| (format!("e{i}"), name(s), name(r))),
            infinite_bundles.iter().map(|&(s, r)| (name(s), name(r))),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn infinite_bundles(&self) -> &[(usize, usize)] {
        &self.infinite_bundles
    }

    /// Number of edges from `u` to `v`, `∞` if a bundle joins them.
    pub fn multiplicity(&self, u: usize, v: usize) -> ExtendedNat {
        if self.infinite_bundles.contains(&(u, v)) {
            return ExtendedNat::Infinite;
        }
        let n = self
            .edges
            .iter()
            .filter(|e| e.source == u && e.range == v)
            .count();
        ExtendedNat::Finite(n as u64)
    }

    /// `(source, range)` pairs joined by at least one edge or bundle.
    fn arrows(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges
            .iter()
            .map(|e| (e.source, e.range))
            .chain(self.infinite_bundles.iter().copied())
    }

    /// Vertices emitting no edge and no bundle.
    pub fn sinks(&self) -> VertexSet {
        let emitting = VertexSet::from_indices(self.vertex_count(), self.arrows().map(|(s, _)| s));
        emitting.complement()
    }

    /// Vertices receiving no edge and no bundle.
    pub fn sources(&self) -> VertexSet {
        let receiving = VertexSet::from_indices(self.vertex_count(), self.arrows().map(|(_, r)| r));
        receiving.complement()
    }

    pub fn infinite_emitters(&self) -> VertexSet {
        VertexSet::from_indices(
            self.vertex_count(),
            self.infinite_bundles.iter().map(|&(s, _)| s),
        )
    }

    /// With finitely many vertices this is just the absence of bundles.
    pub fn is_row_finite(&self) -> bool {
        self.infinite_emitters().is_empty()
    }

    /// Finite emitters that are not sinks.
    pub fn regular_vertices(&self) -> VertexSet {
        self.sinks().union(&self.infinite_emitters()).complement()
    }

    /// One backward step: vertices with an in-neighbour in `layer`.
    pub fn receivers_from(&self, layer: &VertexSet) -> VertexSet {
        VertexSet::from_indices(
            self.vertex_count(),
            self.arrows()
                .filter(|&(s, _)| layer.contains(s))
                .map(|(_, r)| r),
        )
    }

    /// `S_n`: vertices at the end of some directed path of length `>= n`.
    pub fn receivers_at_least(&self, n: usize) -> VertexSet {
        let mut layer = VertexSet::full(self.vertex_count());
        for _ in 0..n {
            let next = self.receivers_from(&layer);
            if next == layer {
                break;
            }
            layer = next;
        }
        layer
    }

    /// The decreasing chain `S_0 ⊇ S_1 ⊇ ...` through the first index `m`
    /// with `S_{m+1} = S_m`, together with `m`.
    pub fn receiver_chain(&self) -> (Vec<VertexSet>, usize) {
        let mut chain = vec![VertexSet::full(self.vertex_count())];
        loop {
            let last = chain.last().expect("chain is never empty");
            let next = self.receivers_from(last);
            if &next == last {
                let index = chain.len() - 1;
                return (chain, index);
            }
            chain.push(next);
        }
    }

    /// True when the graph has a directed cycle, counting bundles as edges.
    pub fn has_cycle(&self) -> bool {
        // A cycle exists iff the receiver chain stabilizes on a nonempty set.
        let (chain, index) = self.receiver_chain();
        !chain[index].is_empty()
    }

    /// Graph-level condition for freeness of the full gauge action:
    /// row-finite with no sinks.
    pub fn full_action_condition(&self) -> bool {
        self.is_row_finite() && self.sinks().is_empty()
    }

    /// Graph-level condition for freeness of the order-`k` gauge action:
    /// every sink and every infinite emitter receives a path of length
    /// `k - 1`. `k` must be at least 2.
    pub fn cyclic_action_condition(&self, k: usize) -> bool {
        assert!(k >= 2, "cyclic gauge groups need k >= 2");
        self.sinks()
            .union(&self.infinite_emitters())
            .is_subset(&self.receivers_at_least(k - 1))
    }

    /// Checks that `vertices` is a directed walk (each consecutive pair
    /// joined by an edge or bundle).
    pub fn is_walk(&self, vertices: &[usize]) -> bool {
        vertices
            .windows(2)
            .all(|w| !self.multiplicity(w[0], w[1]).is_zero())
    }

    /// The same graph with its edge list reordered by `order` (a permutation
    /// of edge positions). Edge ids are kept.
    pub fn with_edge_order(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.edges.len());
        let mut g = self.clone();
        g.edges = order.iter().map(|&i| self.edges[i].clone()).collect();
        g
    }
}
