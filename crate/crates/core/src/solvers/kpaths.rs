use crate::graph::{DirectedPath, EdgeId, VertexId, WeightedDigraph};

/// All simple directed paths with exactly `k` edges, in lexicographic
/// edge-id order. Empty for `k == 0`.
pub fn enumerate_k_paths(graph: &WeightedDigraph, k: usize) -> Vec<DirectedPath> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut on_path = vec![false; graph.vertex_count()];
    let mut stack: Vec<EdgeId> = Vec::with_capacity(k);
    for first in graph.edge_ids() {
        let e = graph.edge(first);
        if e.source == e.target {
            continue;
        }
        on_path[e.source.0] = true;
        on_path[e.target.0] = true;
        stack.push(first);
        extend(graph, k, e.target, &mut on_path, &mut stack, &mut out);
        stack.pop();
        on_path[e.source.0] = false;
        on_path[e.target.0] = false;
    }
    out
}

fn extend(
    graph: &WeightedDigraph,
    k: usize,
    at: VertexId,
    on_path: &mut [bool],
    stack: &mut Vec<EdgeId>,
    out: &mut Vec<DirectedPath>,
) {
    if stack.len() == k {
        out.push(DirectedPath::new(stack.clone()));
        return;
    }
    for &e in graph.out_edges(at) {
        let next = graph.edge(e).target;
        if on_path[next.0] {
            continue;
        }
        on_path[next.0] = true;
        stack.push(e);
        extend(graph, k, next, on_path, stack, out);
        stack.pop();
        on_path[next.0] = false;
    }
}
