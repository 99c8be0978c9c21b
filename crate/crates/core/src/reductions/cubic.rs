use crate::format::FormatError;

use super::setcover::SetCoverInstance;
use super::ReductionError;

/// A simple undirected graph in which every vertex has degree 3. Vertices
/// are 1-based; edges keep their input order and are numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl CubicGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, ReductionError> {
        let bad = |m: String| Err(ReductionError::NotCubic(m));
        let mut degree = vec![0usize; vertex_count];
        let mut seen = std::collections::HashSet::new();
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u == 0 || v == 0 || u > vertex_count || v > vertex_count {
                return bad(format!("edge {} has an endpoint outside 1..={vertex_count}", i + 1));
            }
            if u == v {
                return bad(format!("edge {} is a loop at vertex {u}", i + 1));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return bad(format!("edge {} repeats {u}-{v}", i + 1));
            }
            degree[u - 1] += 1;
            degree[v - 1] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return bad(format!("vertex {} has degree {}", v + 1, degree[v]));
        }
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_vertex_cover(&self, cover: &[usize]) -> bool {
        self.edges
            .iter()
            .all(|(u, v)| cover.contains(u) || cover.contains(v))
    }
}

/// Elements are the edges of `g`; vertex `v` becomes the set of its three
/// incident edges. Vertex covers and set covers then coincide index for index.
pub fn cubic_vc_to_setcover(g: &CubicGraph, tau: usize) -> Result<SetCoverInstance, ReductionError> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        incident[u - 1].push(i + 1);
        incident[v - 1].push(i + 1);
    }
    let sets = incident.iter().map(|s| [s[0], s[1], s[2]]).collect();
    SetCoverInstance::new(g.edges().len(), sets, tau)
}

/// `p cubic <n> <m>` then `e <u> <v>` per edge.
pub fn parse_cubic(text: &str) -> Result<CubicGraph, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let num = |t: &str| -> Result<usize, FormatError> {
            t.parse().map_err(|_| FormatError::new(line_no, format!("bad number `{t}`")))
        };
        match fields.as_slice() {
            ["p", "cubic", n, m] => {
                if header.is_some() {
                    return Err(FormatError::new(line_no, "duplicate header"));
                }
                header = Some((num(n)?, num(m)?));
            }
            ["e", u, v] => {
                if header.is_none() {
                    return Err(FormatError::new(line_no, "edge before `p cubic` header"));
                }
                edges.push((num(u)?, num(v)?));
            }
            _ => return Err(FormatError::new(line_no, "expected `p cubic <n> <m>` or `e <u> <v>`")),
        }
    }
    let (n, m) = header.ok_or_else(|| FormatError::new(last_line, "missing `p cubic` header"))?;
    if edges.len() != m {
        return Err(FormatError::new(
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    CubicGraph::new(n, edges).map_err(|e| FormatError::new(last_line, e.to_string()))
}

pub fn write_cubic(g: &CubicGraph) -> String {
    let mut out = format!("p cubic {} {}\n", g.vertex_count(), g.edges().len());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}
