//! Weighted directed multigraphs, paths over them, and their exact scores.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use thiserror::Error;

use crate::score::ExactScore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
    pub weight: u64,
    pub signature: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge endpoint {vertex} out of range (vertex count {vertex_count})")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("edge weights must be at least 1")]
    ZeroWeight,
    #[error("edge {0} carries no signature")]
    MissingSignature(EdgeId),
}

/// Why a single path is not a path of the graph. Positions are 0-based
/// indices into the path's edge list.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path is empty")]
    Empty,
    #[error("position {position}: unknown edge {edge}")]
    UnknownEdge { position: usize, edge: EdgeId },
    #[error("position {position}: edge {edge} does not start where the previous edge ends")]
    BrokenAdjacency { position: usize, edge: EdgeId },
    #[error("position {position}: vertex {vertex} repeats")]
    RepeatedVertex { position: usize, vertex: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollectionError {
    #[error("path {path_index}: {error}")]
    InvalidPath { path_index: usize, error: PathError },
    #[error("edge {edge} used by path {first_path} and path {second_path}")]
    DuplicateEdge {
        edge: EdgeId,
        first_path: usize,
        second_path: usize,
    },
    #[error("edges not covered: {}", join_ids(.0))]
    MissingEdges(Vec<EdgeId>),
}

fn join_ids(ids: &[EdgeId]) -> String {
    ids.iter()
        .map(|e| e.0.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Directed multigraph with natural edge weights. Edge identity is the
/// [`EdgeId`], so parallel edges are distinct objects.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedDigraph {
    edges: Vec<Edge>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl WeightedDigraph {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            edges: Vec::new(),
            out_edges: vec![Vec::new(); vertex_count],
            in_edges: vec![Vec::new(); vertex_count],
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.out_edges.push(Vec::new());
        self.in_edges.push(Vec::new());
        VertexId(self.out_edges.len() - 1)
    }

    pub fn add_edge(
        &mut self,
        source: VertexId,
        target: VertexId,
        weight: u64,
    ) -> Result<EdgeId, GraphError> {
        self.add_signed_edge(source, target, weight, None)
    }

    pub fn add_signed_edge(
        &mut self,
        source: VertexId,
        target: VertexId,
        weight: u64,
        signature: Option<u64>,
    ) -> Result<EdgeId, GraphError> {
        let n = self.vertex_count();
        for v in [source, target] {
            if v.0 >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v.0,
                    vertex_count: n,
                });
            }
        }
        if weight == 0 {
            return Err(GraphError::ZeroWeight);
        }
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge {
            source,
            target,
            weight,
            signature,
        });
        self.out_edges[source.0].push(id);
        self.in_edges[target.0].push(id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.out_edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn get_edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(id.0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().enumerate().map(|(i, e)| (EdgeId(i), e))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    /// Out-edges of `v` in ascending id order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    /// In-edges of `v` in ascending id order.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.0]
    }

    /// First edge from `u` to `v`, if any.
    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.out_edges(u)
            .iter()
            .copied()
            .find(|&e| self.edge(e).target == v)
    }

    /// Weight census as `(weight, multiplicity)` pairs, ascending by weight.
    pub fn weight_census(&self) -> Vec<(u64, usize)> {
        let mut census = BTreeMap::new();
        for e in &self.edges {
            *census.entry(e.weight).or_insert(0) += 1;
        }
        census.into_iter().collect()
    }

    /// Checks `path` against the graph and returns its vertex sequence.
    pub fn path_vertices(&self, path: &DirectedPath) -> Result<Vec<VertexId>, PathError> {
        let edges = path.edges();
        if edges.is_empty() {
            return Err(PathError::Empty);
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        for (position, &id) in edges.iter().enumerate() {
            let edge = self
                .get_edge(id)
                .ok_or(PathError::UnknownEdge { position, edge: id })?;
            if position == 0 {
                seen[edge.source.0] = true;
                vertices.push(edge.source);
            } else if *vertices.last().unwrap() != edge.source {
                return Err(PathError::BrokenAdjacency { position, edge: id });
            }
            if std::mem::replace(&mut seen[edge.target.0], true) {
                return Err(PathError::RepeatedVertex {
                    position,
                    vertex: edge.target,
                });
            }
            vertices.push(edge.target);
        }
        Ok(vertices)
    }

    /// Topological order (smallest ready vertex first), or a cycle.
    pub fn topological_order(&self) -> Result<Vec<VertexId>, CycleCertificate> {
        let n = self.vertex_count();
        let mut indegree: Vec<usize> = self.in_edges.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(VertexId(v));
            for &e in &self.out_edges[v] {
                let t = self.edges[e.0].target.0;
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.push(Reverse(t));
                }
            }
        }
        if order.len() == n {
            return Ok(order);
        }
        Err(self.find_cycle(&indegree))
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// Walks backwards through vertices left with positive in-degree after
    /// Kahn's algorithm; every such vertex has an unresolved predecessor, so
    /// the walk must close a cycle.
    fn find_cycle(&self, indegree: &[usize]) -> CycleCertificate {
        let start = indegree.iter().position(|&d| d > 0).expect("cycle exists");
        let mut visited_at = vec![usize::MAX; self.vertex_count()];
        let mut trail: Vec<EdgeId> = Vec::new();
        let mut v = start;
        loop {
            visited_at[v] = trail.len();
            let e = *self.in_edges[v]
                .iter()
                .find(|&&e| indegree[self.edges[e.0].source.0] > 0)
                .expect("residual vertex has a residual predecessor");
            trail.push(e);
            v = self.edges[e.0].source.0;
            if visited_at[v] != usize::MAX {
                let mut cycle: Vec<EdgeId> = trail[visited_at[v]..].to_vec();
                cycle.reverse();
                return CycleCertificate { edges: cycle };
            }
        }
    }

    /// One subgraph per distinct signature, densely re-indexed, ascending by
    /// signature.
    pub fn split_by_signature(&self) -> Result<Vec<SignatureComponent>, GraphError> {
        let mut groups: BTreeMap<u64, Vec<EdgeId>> = BTreeMap::new();
        for (id, e) in self.edges() {
            let sig = e.signature.ok_or(GraphError::MissingSignature(id))?;
            groups.entry(sig).or_default().push(id);
        }
        Ok(groups
            .into_iter()
            .map(|(signature, edge_ids)| {
                let mut local = vec![usize::MAX; self.vertex_count()];
                let mut vertices: Vec<VertexId> = edge_ids
                    .iter()
                    .flat_map(|&e| [self.edge(e).source, self.edge(e).target])
                    .collect();
                vertices.sort_unstable();
                vertices.dedup();
                for (i, v) in vertices.iter().enumerate() {
                    local[v.0] = i;
                }
                let mut graph = WeightedDigraph::new(vertices.len());
                for &e in &edge_ids {
                    let edge = self.edge(e);
                    graph
                        .add_signed_edge(
                            VertexId(local[edge.source.0]),
                            VertexId(local[edge.target.0]),
                            edge.weight,
                            edge.signature,
                        )
                        .expect("endpoints remapped in range");
                }
                SignatureComponent {
                    signature,
                    graph,
                    vertex_map: vertices,
                    edge_map: edge_ids,
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCertificate {
    /// Edge ids forming a directed cycle, in traversal order.
    pub edges: Vec<EdgeId>,
}

/// The edges of one signature class; `vertex_map[i]` / `edge_map[i]` give the
/// original id of local vertex / edge `i`.
#[derive(Debug, Clone)]
pub struct SignatureComponent {
    pub signature: u64,
    pub graph: WeightedDigraph,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedPath {
    edges: Vec<EdgeId>,
}

impl DirectedPath {
    pub fn new(edges: Vec<EdgeId>) -> Self {
        Self { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl From<Vec<EdgeId>> for DirectedPath {
    fn from(edges: Vec<EdgeId>) -> Self {
        Self::new(edges)
    }
}

impl fmt::Display for DirectedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_ids(&self.edges))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathCollection {
    paths: Vec<DirectedPath>,
}

impl PathCollection {
    pub fn new(paths: Vec<DirectedPath>) -> Self {
        Self { paths }
    }

    pub fn paths(&self) -> &[DirectedPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn push(&mut self, path: DirectedPath) {
        self.paths.push(path);
    }

    pub fn into_paths(self) -> Vec<DirectedPath> {
        self.paths
    }
}

impl FromIterator<DirectedPath> for PathCollection {
    fn from_iter<I: IntoIterator<Item = DirectedPath>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// A collection certified to cover every edge of its graph exactly once.
/// Only [`validate_partition`] constructs one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPartition {
    collection: PathCollection,
}

impl PathPartition {
    pub fn collection(&self) -> &PathCollection {
        &self.collection
    }

    pub fn paths(&self) -> &[DirectedPath] {
        self.collection.paths()
    }

    pub fn into_collection(self) -> PathCollection {
        self.collection
    }
}

/// `2^score` of a path: `Π (i+1)^{w(e_i)}` over 1-based positions `i`.
pub fn score_of_path(graph: &WeightedDigraph, path: &DirectedPath) -> Result<ExactScore, PathError> {
    graph.path_vertices(path)?;
    Ok(unchecked_path_score(graph, path.edges()))
}

pub(crate) fn unchecked_path_score(graph: &WeightedDigraph, edges: &[EdgeId]) -> ExactScore {
    let mut score = ExactScore::one();
    for (i, &e) in edges.iter().enumerate() {
        score.mul_power(i as u64 + 2, graph.edge(e).weight);
    }
    score
}

/// Checks each path and pairwise edge-disjointness.
pub fn validate_collection(graph: &WeightedDigraph, c: &PathCollection) -> Result<(), CollectionError> {
    let mut owner = vec![usize::MAX; graph.edge_count()];
    for (path_index, path) in c.paths().iter().enumerate() {
        graph
            .path_vertices(path)
            .map_err(|error| CollectionError::InvalidPath { path_index, error })?;
        for &e in path.edges() {
            if owner[e.0] != usize::MAX {
                return Err(CollectionError::DuplicateEdge {
                    edge: e,
                    first_path: owner[e.0],
                    second_path: path_index,
                });
            }
            owner[e.0] = path_index;
        }
    }
    Ok(())
}

/// Sum of member path scores (product of encoded values).
pub fn score_of_collection(
    graph: &WeightedDigraph,
    c: &PathCollection,
) -> Result<ExactScore, CollectionError> {
    validate_collection(graph, c)?;
    Ok(c.paths()
        .iter()
        .map(|p| unchecked_path_score(graph, p.edges()))
        .product())
}

pub fn validate_partition(
    graph: &WeightedDigraph,
    c: &PathCollection,
) -> Result<PathPartition, CollectionError> {
    validate_collection(graph, c)?;
    let mut covered = vec![false; graph.edge_count()];
    for p in c.paths() {
        for &e in p.edges() {
            covered[e.0] = true;
        }
    }
    let missing: Vec<EdgeId> = graph.edge_ids().filter(|e| !covered[e.0]).collect();
    if !missing.is_empty() {
        return Err(CollectionError::MissingEdges(missing));
    }
    Ok(PathPartition {
        collection: c.clone(),
    })
}
