//! The two hardness constructions (3-SAT to IP, (3,2)-set cover to k-IP),
//! the cubic vertex cover front end, and witness translation both ways.

mod cnf;
mod cover_kip;
mod cubic;
pub mod labels;
mod sat_ip;
mod setcover;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::format::InstanceFile;
use crate::graph::{EdgeId, VertexId, WeightedDigraph};
use labels::{EdgeRole, VertexLabel};

pub use cnf::{normalize_cnf, parse_dimacs, write_dimacs, Assignment, CnfFormula, Literal, RawCnf};
pub use cover_kip::{cover_to_kpaths, kip_target, kpaths_to_cover, setcover_to_kip, KipInstance};
pub use cubic::{cubic_vc_to_setcover, parse_cubic, write_cubic, CubicGraph};
pub use sat_ip::{assignment_to_partition, ip_target, partition_to_assignment, sat3_to_ip, IpInstance};
pub use setcover::{parse_setcover, write_setcover, Cover, SetCoverInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("clause {clause} has {len} literals; at most 3 are supported")]
    ClauseTooLong { clause: usize, len: usize },
    #[error("every clause is a tautology; the formula is trivially satisfiable")]
    TriviallySatisfiable,
    #[error("formula has no clauses")]
    NoClauses,
    #[error("clause {clause} mentions variable {var} outside 1..={n}")]
    VariableOutOfRange { clause: usize, var: usize, n: usize },
    #[error("clause {clause} contains both polarities of a variable")]
    NotNormalized { clause: usize },
    #[error("assignment falsifies clause {clause}")]
    Unsatisfied { clause: usize },
    #[error("assignment has {got} values for {expected} variables")]
    AssignmentSize { got: usize, expected: usize },
    #[error("invalid set-cover instance: {0}")]
    InvalidSetCover(String),
    #[error("k must be at least 3, got {0}")]
    InvalidK(usize),
    #[error("element {element} is not covered")]
    NotACover { element: usize },
    #[error("cover has {size} sets but tau is {tau}")]
    CoverTooLarge { size: usize, tau: usize },
    #[error("graph is not cubic: {0}")]
    NotCubic(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("instance labels do not match the construction: {0}")]
    BadLabels(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Structured names for every vertex and edge of a generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Labels {
    vertices: Vec<VertexLabel>,
    edges: Vec<EdgeRole>,
    index: HashMap<VertexLabel, VertexId>,
}

impl Labels {
    pub fn vertex_label(&self, v: VertexId) -> VertexLabel {
        self.vertices[v.0]
    }

    pub fn edge_role(&self, e: EdgeId) -> EdgeRole {
        self.edges[e.0]
    }

    pub fn find(&self, label: VertexLabel) -> Option<VertexId> {
        self.index.get(&label).copied()
    }

    /// Number of edges per role, by role name.
    pub fn role_census(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for r in &self.edges {
            *out.entry(r.to_string()).or_insert(0) += 1;
        }
        out
    }

    pub(crate) fn get(&self, label: VertexLabel) -> VertexId {
        self.index[&label]
    }

    fn write_into(&self, file: &mut InstanceFile) {
        file.vertex_labels = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &l)| (VertexId(i), l))
            .collect();
        file.edge_roles = self.edges.iter().enumerate().map(|(i, &r)| (EdgeId(i), r)).collect();
    }

    fn read_from(file: &InstanceFile) -> Result<Self, ReductionError> {
        let g = &file.graph;
        let complete = |n: usize, keys: Vec<usize>| keys == (0..n).collect::<Vec<_>>();
        if !complete(g.vertex_count(), file.vertex_labels.keys().map(|v| v.0).collect()) {
            return Err(ReductionError::BadLabels("every vertex needs a label".into()));
        }
        if !complete(g.edge_count(), file.edge_roles.keys().map(|e| e.0).collect()) {
            return Err(ReductionError::BadLabels("every edge needs a role".into()));
        }
        let vertices: Vec<VertexLabel> = file.vertex_labels.values().copied().collect();
        let mut index = HashMap::new();
        for (i, &l) in vertices.iter().enumerate() {
            if index.insert(l, VertexId(i)).is_some() {
                return Err(ReductionError::BadLabels(format!("label {l} used twice")));
            }
        }
        Ok(Self {
            vertices,
            edges: file.edge_roles.values().copied().collect(),
            index,
        })
    }
}

/// Grows a graph addressed by vertex labels.
#[derive(Default)]
pub(crate) struct Builder {
    graph: WeightedDigraph,
    labels: Labels,
}

impl Builder {
    pub(crate) fn vertex(&mut self, label: VertexLabel) -> VertexId {
        if let Some(v) = self.labels.find(label) {
            return v;
        }
        let v = self.graph.add_vertex();
        self.labels.vertices.push(label);
        self.labels.index.insert(label, v);
        v
    }

    pub(crate) fn edge(&mut self, from: VertexLabel, to: VertexLabel, weight: u64, role: EdgeRole) -> EdgeId {
        let (u, v) = (self.vertex(from), self.vertex(to));
        self.labels.edges.push(role);
        self.graph.add_edge(u, v, weight).expect("builder edges are well-formed")
    }

    pub(crate) fn finish(self) -> (WeightedDigraph, Labels) {
        (self.graph, self.labels)
    }
}
