//! Line-oriented text formats: graphs, instance files, and witness files.
//!
//! ```text
//! ipgraph <vertex_count> <edge_count>
//! e <edge_id> <source> <target> <weight> [<signature>]
//! k <k>                      # instance trailer, k-path instances only
//! target <factored score>    # instance trailer
//! # label v <vertex_id> <label>
//! # label e <edge_id> <role>
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{DirectedPath, EdgeId, PathCollection, VertexId, WeightedDigraph};
use crate::reductions::labels::{EdgeRole, VertexLabel};
use crate::score::ExactScore;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// A graph plus the optional decision-problem trailers and labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstanceFile {
    pub graph: WeightedDigraph,
    pub k: Option<usize>,
    pub target: Option<ExactScore>,
    pub vertex_labels: BTreeMap<VertexId, VertexLabel>,
    pub edge_roles: BTreeMap<EdgeId, EdgeRole>,
}

pub fn write_graph(graph: &WeightedDigraph) -> String {
    let mut out = String::new();
    writeln!(out, "ipgraph {} {}", graph.vertex_count(), graph.edge_count()).unwrap();
    for (id, e) in graph.edges() {
        write!(out, "e {} {} {} {}", id, e.source, e.target, e.weight).unwrap();
        if let Some(sig) = e.signature {
            write!(out, " {sig}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parses a bare graph; instance trailers are rejected.
pub fn parse_graph(text: &str) -> Result<WeightedDigraph, FormatError> {
    parse(text, false).map(|f| f.graph)
}

impl InstanceFile {
    pub fn new(graph: WeightedDigraph) -> Self {
        Self {
            graph,
            ..Self::default()
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        parse(text, true)
    }

    pub fn write(&self) -> String {
        let mut out = write_graph(&self.graph);
        if let Some(k) = self.k {
            writeln!(out, "k {k}").unwrap();
        }
        if let Some(t) = &self.target {
            writeln!(out, "target {t}").unwrap();
        }
        for (v, label) in &self.vertex_labels {
            writeln!(out, "# label v {v} {label}").unwrap();
        }
        for (e, role) in &self.edge_roles {
            writeln!(out, "# label e {e} {role}").unwrap();
        }
        out
    }
}

/// Source, target, weight, signature.
type RawEdge = (usize, usize, u64, Option<u64>);

fn parse(text: &str, allow_trailers: bool) -> Result<InstanceFile, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut slots: Vec<Option<RawEdge>> = Vec::new();
    let mut seen_edges = 0usize;
    let mut file = InstanceFile::default();
    let mut raw_vertex_labels: Vec<(usize, usize, VertexLabel)> = Vec::new();
    let mut raw_edge_roles: Vec<(usize, usize, EdgeRole)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |m: String| FormatError::new(line_no, m);
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let toks: Vec<&str> = comment.split_whitespace().collect();
            if toks.first() == Some(&"label") {
                match toks.as_slice() {
                    ["label", "v", id, label] => {
                        let id = parse_num(id).map_err(err)?;
                        let label = label.parse::<VertexLabel>().map_err(err)?;
                        raw_vertex_labels.push((line_no, id, label));
                    }
                    ["label", "e", id, role] => {
                        let id = parse_num(id).map_err(err)?;
                        let role = role.parse::<EdgeRole>().map_err(err)?;
                        raw_edge_roles.push((line_no, id, role));
                    }
                    _ => return Err(err("malformed label line".into())),
                }
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "ipgraph" => {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                let [_, v, e] = toks.as_slice() else {
                    return Err(err("expected `ipgraph <vertex_count> <edge_count>`".into()));
                };
                let (v, e) = (parse_num(v).map_err(err)?, parse_num(e).map_err(err)?);
                header = Some((v, e));
                slots = vec![None; e];
            }
            _ if header.is_none() => {
                return Err(err("expected `ipgraph` header before any other line".into()));
            }
            "e" => {
                if file.k.is_some() || file.target.is_some() {
                    return Err(err("edge line after trailer".into()));
                }
                let (id, s, t, w, sig) = match toks.as_slice() {
                    [_, id, s, t, w] => (id, s, t, w, None),
                    [_, id, s, t, w, sig] => (id, s, t, w, Some(*sig)),
                    _ => {
                        return Err(err(
                            "expected `e <edge_id> <source> <target> <weight> [<signature>]`".into(),
                        ))
                    }
                };
                let (vc, ec) = header.unwrap();
                let id = parse_num(id).map_err(err)?;
                let s = parse_num(s).map_err(err)?;
                let t = parse_num(t).map_err(err)?;
                let w = parse_num(w).map_err(err)? as u64;
                let sig = sig.map(parse_num).transpose().map_err(err)?.map(|s| s as u64);
                if id >= ec {
                    return Err(err(format!("edge id {id} out of range 0..{ec}")));
                }
                if s >= vc || t >= vc {
                    return Err(err(format!("endpoint out of range 0..{vc}")));
                }
                if w == 0 {
                    return Err(err("edge weight must be at least 1".into()));
                }
                if slots[id].is_some() {
                    return Err(err(format!("duplicate edge id {id}")));
                }
                slots[id] = Some((s, t, w, sig));
                seen_edges += 1;
            }
            "k" if allow_trailers => {
                let [_, k] = toks.as_slice() else {
                    return Err(err("expected `k <k>`".into()));
                };
                if file.k.is_some() {
                    return Err(err("duplicate `k` trailer".into()));
                }
                let k = parse_num(k).map_err(err)?;
                if k == 0 {
                    return Err(err("k must be at least 1".into()));
                }
                file.k = Some(k);
            }
            "target" if allow_trailers => {
                if file.target.is_some() {
                    return Err(err("duplicate `target` trailer".into()));
                }
                let rest = line["target".len()..].trim();
                file.target = Some(rest.parse::<ExactScore>().map_err(|e| err(e.to_string()))?);
            }
            other => return Err(err(format!("unexpected token `{other}`"))),
        }
    }

    let Some((vc, ec)) = header else {
        return Err(FormatError::new(text.lines().count().max(1), "missing `ipgraph` header"));
    };
    if seen_edges != ec {
        let missing = slots.iter().position(Option::is_none).unwrap_or(0);
        return Err(FormatError::new(
            text.lines().count(),
            format!("expected {ec} edges, found {seen_edges} (edge {missing} missing)"),
        ));
    }
    let mut graph = WeightedDigraph::new(vc);
    for (s, t, w, sig) in slots.into_iter().flatten() {
        graph
            .add_signed_edge(VertexId(s), VertexId(t), w, sig)
            .expect("validated above");
    }
    for (line, id, label) in raw_vertex_labels {
        if id >= vc {
            return Err(FormatError::new(line, format!("label for unknown vertex {id}")));
        }
        if file.vertex_labels.insert(VertexId(id), label).is_some() {
            return Err(FormatError::new(line, format!("vertex {id} labelled twice")));
        }
    }
    for (line, id, role) in raw_edge_roles {
        if id >= ec {
            return Err(FormatError::new(line, format!("label for unknown edge {id}")));
        }
        if file.edge_roles.insert(EdgeId(id), role).is_some() {
            return Err(FormatError::new(line, format!("edge {id} labelled twice")));
        }
    }
    file.graph = graph;
    Ok(file)
}

fn parse_num(tok: &str) -> Result<usize, String> {
    tok.parse::<usize>()
        .map_err(|_| format!("expected a natural number, found `{tok}`"))
}

/// One path per line as space-separated edge ids; `#` starts a comment.
pub fn parse_witness(text: &str) -> Result<PathCollection, FormatError> {
    let mut paths = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let edges = line
            .split_whitespace()
            .map(|t| parse_num(t).map(EdgeId))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|m| FormatError::new(idx + 1, m))?;
        paths.push(DirectedPath::new(edges));
    }
    Ok(PathCollection::new(paths))
}

pub fn write_witness(c: &PathCollection) -> String {
    c.paths().iter().map(|p| format!("{p}\n")).collect()
}
