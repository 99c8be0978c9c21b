//! Exhaustive reference solvers. They share no search code with
//! [`crate::solvers`], so agreement between the two is evidence, not tautology.

use thiserror::Error;

use crate::graph::{
    score_of_collection, DirectedPath, EdgeId, PathCollection, VertexId, WeightedDigraph,
};
use crate::reductions::{Assignment, CnfFormula, Cover, CubicGraph, SetCoverInstance};
use crate::score::ExactScore;
use crate::solvers::{MaxIpResult, PackingResult};

/// Caps the number of candidates an oracle may enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimit {
    pub max_items: u64,
}

impl Default for OracleLimit {
    fn default() -> Self {
        Self { max_items: 1 << 24 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search space exceeds the oracle limit of {limit} items")]
    SizeLimit { limit: u64 },
    #[error("graph has a directed cycle")]
    Cyclic,
    #[error("graph has no edges")]
    EmptyGraph,
}

struct Counter {
    used: u64,
    limit: u64,
}

impl Counter {
    fn new(limit: OracleLimit) -> Self {
        Self {
            used: 0,
            limit: limit.max_items,
        }
    }

    fn take(&mut self) -> Result<(), OracleError> {
        self.used += 1;
        if self.used > self.limit {
            return Err(OracleError::SizeLimit { limit: self.limit });
        }
        Ok(())
    }
}

fn check_space(bits: usize, limit: OracleLimit) -> Result<(), OracleError> {
    if bits >= 64 || (1u64 << bits) > limit.max_items {
        return Err(OracleError::SizeLimit {
            limit: limit.max_items,
        });
    }
    Ok(())
}

/// First satisfying assignment in lexicographic order with FALSE before TRUE.
pub fn brute_force_sat(f: &CnfFormula, limit: OracleLimit) -> Result<Option<Assignment>, OracleError> {
    let n = f.variable_count();
    check_space(n, limit)?;
    for mask in 0u64..(1u64 << n) {
        // Variable 1 is the most significant bit, so masks run in lex order.
        let values = (0..n).map(|i| mask >> (n - 1 - i) & 1 == 1).collect();
        let a = Assignment::new(values);
        if f.is_satisfied_by(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Subsets of `0..m` by increasing size, each size in lexicographic order.
fn subsets_by_size(m: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == size {
            return visit(cur);
        }
        for i in start..m {
            cur.push(i);
            if rec(i + 1, m, size, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    for size in 0..=m {
        if rec(0, m, size, &mut Vec::new(), &mut visit) {
            return;
        }
    }
}

/// A minimum cover (lexicographically first among minimum ones) if its size
/// is at most τ.
pub fn brute_force_set_cover(sc: &SetCoverInstance, limit: OracleLimit) -> Result<Option<Cover>, OracleError> {
    check_space(sc.set_count(), limit)?;
    let mut found = None;
    subsets_by_size(sc.set_count(), |chosen| {
        let covered = (1..=sc.element_count()).all(|x| chosen.iter().any(|&j| sc.set(j + 1).contains(&x)));
        if covered {
            found = Some(Cover::new(chosen.iter().map(|j| j + 1)));
        }
        covered
    });
    Ok(found.filter(|c| c.len() <= sc.tau()))
}

/// A minimum vertex cover (1-based, lexicographically first) if its size is
/// at most τ.
pub fn brute_force_vertex_cover(
    g: &CubicGraph,
    tau: usize,
    limit: OracleLimit,
) -> Result<Option<Vec<usize>>, OracleError> {
    check_space(g.vertex_count(), limit)?;
    let mut found = None;
    subsets_by_size(g.vertex_count(), |chosen| {
        let vs: Vec<usize> = chosen.iter().map(|v| v + 1).collect();
        let ok = g.edges().iter().all(|(u, v)| vs.contains(u) || vs.contains(v));
        if ok {
            found = Some(vs);
        }
        ok
    });
    Ok(found.filter(|c| c.len() <= tau))
}

/// Every simple directed path, in no particular order.
fn all_simple_paths(graph: &WeightedDigraph, limit: OracleLimit) -> Result<Vec<Vec<EdgeId>>, OracleError> {
    fn grow(
        graph: &WeightedDigraph,
        visited: &mut Vec<VertexId>,
        edges: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
        counter: &mut Counter,
    ) -> Result<(), OracleError> {
        let at = *visited.last().expect("nonempty");
        for (id, e) in graph.edges() {
            if e.source != at || visited.contains(&e.target) {
                continue;
            }
            counter.take()?;
            edges.push(id);
            visited.push(e.target);
            out.push(edges.clone());
            grow(graph, visited, edges, out, counter)?;
            visited.pop();
            edges.pop();
        }
        Ok(())
    }
    let mut counter = Counter::new(limit);
    let mut out = Vec::new();
    for v in graph.vertices() {
        grow(graph, &mut vec![v], &mut Vec::new(), &mut out, &mut counter)?;
    }
    Ok(out)
}

fn path_value(graph: &WeightedDigraph, edges: &[EdgeId]) -> ExactScore {
    let mut s = ExactScore::one();
    for (i, e) in edges.iter().enumerate() {
        s *= &ExactScore::power(i as u64 + 2, graph.edge(*e).weight);
    }
    s
}

/// Best single simple path; ties go to the lexicographically smallest.
pub fn brute_force_max_ip(graph: &WeightedDigraph, limit: OracleLimit) -> Result<MaxIpResult, OracleError> {
    let mut best: Option<(ExactScore, Vec<EdgeId>)> = None;
    for p in all_simple_paths(graph, limit)? {
        let s = path_value(graph, &p);
        let better = match &best {
            None => true,
            Some((bs, bp)) => s > *bs || (s == *bs && p < *bp),
        };
        if better {
            best = Some((s, p));
        }
    }
    let (score, edges) = best.ok_or(OracleError::EmptyGraph)?;
    Ok(MaxIpResult {
        best_path: DirectedPath::new(edges),
        score,
    })
}

/// Best edge-disjoint set of k-paths, by include/exclude over all k-paths.
pub fn brute_force_kip(graph: &WeightedDigraph, k: usize, limit: OracleLimit) -> Result<PackingResult, OracleError> {
    let paths: Vec<Vec<EdgeId>> = all_simple_paths(graph, limit)?
        .into_iter()
        .filter(|p| p.len() == k)
        .collect();
    let values: Vec<ExactScore> = paths.iter().map(|p| path_value(graph, p)).collect();
    let mut counter = Counter::new(limit);
    let mut used = vec![false; graph.edge_count()];
    let mut chosen = Vec::new();
    let mut best = (ExactScore::one(), Vec::new());

    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        paths: &[Vec<EdgeId>],
        values: &[ExactScore],
        used: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        acc: ExactScore,
        best: &mut (ExactScore, Vec<usize>),
        counter: &mut Counter,
    ) -> Result<(), OracleError> {
        counter.take()?;
        if i == paths.len() {
            if acc > best.0 {
                *best = (acc, chosen.clone());
            }
            return Ok(());
        }
        if paths[i].iter().all(|e| !used[e.0]) {
            for e in &paths[i] {
                used[e.0] = true;
            }
            chosen.push(i);
            rec(i + 1, paths, values, used, chosen, &acc * &values[i], best, counter)?;
            chosen.pop();
            for e in &paths[i] {
                used[e.0] = false;
            }
        }
        rec(i + 1, paths, values, used, chosen, acc, best, counter)
    }

    rec(0, &paths, &values, &mut used, &mut chosen, ExactScore::one(), &mut best, &mut counter)?;
    let collection: PathCollection = best.1.iter().map(|&i| DirectedPath::new(paths[i].clone())).collect();
    Ok(PackingResult {
        collection,
        score: best.0,
        optimal: true,
        nodes_explored: counter.used,
    })
}

/// Best path partition, by trying every combination of per-vertex chainings.
pub fn brute_force_ip(graph: &WeightedDigraph, limit: OracleLimit) -> Result<PackingResult, OracleError> {
    if graph.edge_count() == 0 {
        return Err(OracleError::EmptyGraph);
    }
    if !graph.is_acyclic() {
        return Err(OracleError::Cyclic);
    }
    // Per vertex, every injective partial map from out-edges to in-edges.
    let options: Vec<Vec<Vec<Option<EdgeId>>>> = graph
        .vertices()
        .map(|v| {
            let mut out = Vec::new();
            partial_maps(graph.in_edges(v), graph.out_edges(v).len(), &mut Vec::new(), &mut out);
            out
        })
        .collect();
    let mut counter = Counter::new(limit);
    let mut pick = vec![0usize; options.len()];
    let mut best: Option<(ExactScore, PathCollection)> = None;
    loop {
        counter.take()?;
        let mut pred = vec![None; graph.edge_count()];
        for v in graph.vertices() {
            for (&o, &link) in graph.out_edges(v).iter().zip(&options[v.0][pick[v.0]]) {
                pred[o.0] = link;
            }
        }
        let collection = assemble(graph, &pred);
        let score = score_of_collection(graph, &collection).expect("chainings form valid paths");
        if best.as_ref().is_none_or(|(b, _)| score > *b) {
            best = Some((score, collection));
        }
        // Odometer over the per-vertex options.
        let mut idx = 0;
        loop {
            if idx == pick.len() {
                let (score, collection) = best.expect("at least one chaining");
                return Ok(PackingResult {
                    collection,
                    score,
                    optimal: true,
                    nodes_explored: counter.used,
                });
            }
            pick[idx] += 1;
            if pick[idx] < options[idx].len() {
                break;
            }
            pick[idx] = 0;
            idx += 1;
        }
    }
}

fn partial_maps(ins: &[EdgeId], outs: usize, cur: &mut Vec<Option<EdgeId>>, out: &mut Vec<Vec<Option<EdgeId>>>) {
    if cur.len() == outs {
        out.push(cur.clone());
        return;
    }
    cur.push(None);
    partial_maps(ins, outs, cur, out);
    cur.pop();
    for &e in ins {
        if !cur.contains(&Some(e)) {
            cur.push(Some(e));
            partial_maps(ins, outs, cur, out);
            cur.pop();
        }
    }
}

fn assemble(graph: &WeightedDigraph, pred: &[Option<EdgeId>]) -> PathCollection {
    let mut succ = vec![None; graph.edge_count()];
    for (e, p) in pred.iter().enumerate() {
        if let Some(p) = p {
            succ[p.0] = Some(EdgeId(e));
        }
    }
    graph
        .edge_ids()
        .filter(|e| pred[e.0].is_none())
        .map(|start| {
            let mut edges = vec![start];
            let mut at = start;
            while let Some(next) = succ[at.0] {
                edges.push(next);
                at = next;
            }
            DirectedPath::new(edges)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{normalize_cnf, Literal, RawCnf};
    use num_bigint::BigUint;

    fn formula(n: usize, clauses: &[&[i64]]) -> CnfFormula {
        normalize_cnf(&RawCnf {
            variable_count: n,
            clauses: clauses
                .iter()
                .map(|c| c.iter().map(|&l| Literal::from_dimacs(l).unwrap()).collect())
                .collect(),
        })
        .unwrap()
    }

    #[test]
    fn sat_examples() {
        let lim = OracleLimit::default();
        assert_eq!(brute_force_sat(&formula(1, &[&[1]]), lim).unwrap(), Some(Assignment::new(vec![true])));
        assert_eq!(brute_force_sat(&formula(1, &[&[1], &[-1]]), lim).unwrap(), None);
        assert_eq!(
            brute_force_sat(&formula(2, &[&[1, 2]]), lim).unwrap(),
            Some(Assignment::new(vec![false, true]))
        );
        assert!(brute_force_sat(&formula(3, &[&[1, 2, 3]]), OracleLimit { max_items: 4 }).is_err());
    }

    #[test]
    fn set_cover_examples() {
        let lim = OracleLimit::default();
        let twins = SetCoverInstance::new(3, vec![[1, 2, 3], [1, 2, 3]], 1).unwrap();
        assert_eq!(brute_force_set_cover(&twins, lim).unwrap(), Some(Cover::new([1])));
        let k4 = CubicGraph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(brute_force_vertex_cover(&k4, 2, lim).unwrap(), None);
        assert_eq!(brute_force_vertex_cover(&k4, 3, lim).unwrap(), Some(vec![1, 2, 3]));
    }

    #[test]
    fn path_examples() {
        let lim = OracleLimit::default();
        let mut g = WeightedDigraph::new(4);
        for i in 0..3 {
            g.add_edge(VertexId(i), VertexId(i + 1), 1).unwrap();
        }
        g.add_edge(VertexId(0), VertexId(3), 2).unwrap();
        assert_eq!(brute_force_max_ip(&g, lim).unwrap().score.materialize(), BigUint::from(24u32));
        let ip = brute_force_ip(&g, lim).unwrap();
        assert_eq!(ip.score.materialize(), BigUint::from(24u32 * 4));
        let kip = brute_force_kip(&g, 1, lim).unwrap();
        assert_eq!(kip.collection.len(), 4);
        assert!(brute_force_kip(&g, 5, lim).unwrap().collection.is_empty());
    }
}
