use std::cmp::Ordering;

use crate::graph::{unchecked_path_score, DirectedPath, EdgeId, WeightedDigraph};
use crate::score::ExactScore;

use super::{MaxIpResult, SolverError};

#[derive(Clone)]
struct Best {
    score: ExactScore,
    edges: Vec<EdgeId>,
}

/// Higher score wins; equal scores go to the lexicographically smaller path.
fn better(a: &Best, b: &Best) -> bool {
    match a.score.cmp(&b.score) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.edges < b.edges,
    }
}

/// Maximum-score single path of a DAG.
///
/// State `(v, ℓ)` holds the best path with `ℓ` edges ending at `v`. Appending an
/// edge at position `ℓ + 1` multiplies the encoded value by `(ℓ + 2)^w` and
/// leaves earlier positions untouched, so extending the best `(u, ℓ)` prefix
/// along `(u, v)` yields the best `(v, ℓ + 1)` path using that edge.
pub fn max_ip_dag(graph: &WeightedDigraph) -> Result<MaxIpResult, SolverError> {
    if graph.edge_count() == 0 {
        return Err(SolverError::EmptyGraph);
    }
    let order = graph.topological_order().map_err(SolverError::Cyclic)?;
    // table[v][ℓ] for ℓ ≥ 1; index 0 unused.
    let mut table: Vec<Vec<Option<Best>>> = vec![vec![None]; graph.vertex_count()];
    let mut overall: Option<Best> = None;
    for &v in &order {
        let mut row: Vec<Option<Best>> = vec![None];
        for &e in graph.in_edges(v) {
            let edge = graph.edge(e);
            let weight = edge.weight;
            let mut candidates = vec![(1usize, Best {
                score: ExactScore::power(2, weight),
                edges: vec![e],
            })];
            for (len, prefix) in table[edge.source.0].iter().enumerate().skip(1) {
                if let Some(prefix) = prefix {
                    let mut score = prefix.score.clone();
                    score.mul_power(len as u64 + 2, weight);
                    let mut edges = prefix.edges.clone();
                    edges.push(e);
                    candidates.push((len + 1, Best { score, edges }));
                }
            }
            for (len, cand) in candidates {
                if row.len() <= len {
                    row.resize(len + 1, None);
                }
                if row[len].as_ref().is_none_or(|cur| better(&cand, cur)) {
                    row[len] = Some(cand);
                }
            }
        }
        for best in row.iter().flatten() {
            if overall.as_ref().is_none_or(|cur| better(best, cur)) {
                overall = Some(best.clone());
            }
        }
        table[v.0] = row;
    }
    let best = overall.expect("nonempty graph has a path");
    debug_assert_eq!(unchecked_path_score(graph, &best.edges), best.score);
    Ok(MaxIpResult {
        best_path: DirectedPath::new(best.edges),
        score: best.score,
    })
}
