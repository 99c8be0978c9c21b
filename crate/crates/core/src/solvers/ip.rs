use std::cmp::Ordering;
use std::collections::HashMap;

use crate::graph::{
    validate_partition, DirectedPath, EdgeId, PathCollection, PathPartition, VertexId,
    WeightedDigraph,
};
use crate::score::ExactScore;

use super::{BudgetTracker, Decision, PackingResult, SearchOptions, SolverBudget, SolverError, Verdict};

pub fn exact_ip(graph: &WeightedDigraph, budget: SolverBudget) -> Result<PackingResult, SolverError> {
    exact_ip_with(graph, budget, SearchOptions::default())
}

/// Optimal path partition of a DAG.
///
/// A partition is a choice, at every vertex, of which in-edge each out-edge
/// continues (if any). Vertices are settled in topological order; once a
/// vertex is settled, its out-edges have fixed positions `p` and contribute
/// `(p + 1)^w` regardless of how their paths continue.
pub fn exact_ip_with(
    graph: &WeightedDigraph,
    budget: SolverBudget,
    options: SearchOptions,
) -> Result<PackingResult, SolverError> {
    let mut search = ChainSearch::new(graph, budget, options, None)?;
    search.seed();
    search.run();
    let optimal = !search.tracker.exhausted();
    let collection = search.best_collection();
    Ok(PackingResult {
        collection,
        score: search.best_score.unwrap_or_else(ExactScore::one),
        optimal,
        nodes_explored: search.tracker.nodes(),
    })
}

/// Is there a path partition scoring at least `target`?
pub fn decide_ip(
    graph: &WeightedDigraph,
    target: &ExactScore,
    budget: SolverBudget,
) -> Result<Decision<PathPartition>, SolverError> {
    let mut search = ChainSearch::new(graph, budget, SearchOptions::default(), Some(target.clone()))?;
    if target.is_one() {
        // Every partition qualifies; chain greedily without searching.
        search.tracker = BudgetTracker::new(SolverBudget::unlimited());
        search.first_leaf_only = true;
    }
    search.run();
    let nodes_explored = search.tracker.nodes();
    let verdict = if search.reached {
        let witness = validate_partition(graph, &search.best_collection())
            .expect("search leaves are partitions");
        Verdict::Yes(witness)
    } else if search.tracker.exhausted() {
        Verdict::Unknown
    } else {
        Verdict::No
    };
    Ok(Decision {
        verdict,
        nodes_explored,
    })
}

/// One way of continuing the in-edges of a vertex: `links[j]` is the in-edge
/// chained into the j-th out-edge.
struct Choice {
    links: Vec<Option<EdgeId>>,
    gain: ExactScore,
}

struct ChainSearch<'a> {
    graph: &'a WeightedDigraph,
    order: Vec<VertexId>,
    /// Edges crossing the cut before the vertex at each depth, ascending ids.
    frontier: Vec<Vec<EdgeId>>,
    /// Out-edge weights of each vertex, descending.
    sorted_out_weights: Vec<Vec<u64>>,
    pos: Vec<u64>,
    pred: Vec<Option<EdgeId>>,
    target: Option<ExactScore>,
    options: SearchOptions,
    tracker: BudgetTracker,
    memo: HashMap<(usize, Vec<u64>), ExactScore>,
    best_score: Option<ExactScore>,
    best_pred: Vec<Option<EdgeId>>,
    reached: bool,
    first_leaf_only: bool,
}

impl<'a> ChainSearch<'a> {
    fn new(
        graph: &'a WeightedDigraph,
        budget: SolverBudget,
        options: SearchOptions,
        target: Option<ExactScore>,
    ) -> Result<Self, SolverError> {
        if graph.edge_count() == 0 {
            return Err(SolverError::EmptyGraph);
        }
        let order = graph.topological_order().map_err(SolverError::Cyclic)?;
        let mut rank = vec![0; graph.vertex_count()];
        for (d, v) in order.iter().enumerate() {
            rank[v.0] = d;
        }
        let frontier = (0..=order.len())
            .map(|d| {
                graph
                    .edge_ids()
                    .filter(|&e| {
                        let edge = graph.edge(e);
                        rank[edge.source.0] < d && d <= rank[edge.target.0]
                    })
                    .collect()
            })
            .collect();
        let sorted_out_weights = graph
            .vertices()
            .map(|v| {
                let mut ws: Vec<u64> = graph.out_edges(v).iter().map(|&e| graph.edge(e).weight).collect();
                ws.sort_unstable_by(|a, b| b.cmp(a));
                ws
            })
            .collect();
        Ok(Self {
            graph,
            order,
            frontier,
            sorted_out_weights,
            pos: vec![0; graph.edge_count()],
            pred: vec![None; graph.edge_count()],
            target,
            options,
            tracker: BudgetTracker::new(budget),
            memo: HashMap::new(),
            best_score: None,
            best_pred: Vec::new(),
            reached: false,
            first_leaf_only: false,
        })
    }

    /// Installs the first leaf of the search order as incumbent, so a result
    /// exists even when the budget is spent immediately.
    fn seed(&mut self) {
        let tracker = std::mem::replace(&mut self.tracker, BudgetTracker::new(SolverBudget::unlimited()));
        self.first_leaf_only = true;
        self.run();
        self.first_leaf_only = false;
        self.tracker = tracker;
        self.memo.clear();
    }

    fn run(&mut self) {
        self.search(0, ExactScore::one());
    }

    fn done(&self) -> bool {
        self.reached || self.tracker.exhausted() || (self.first_leaf_only && self.best_score.is_some())
    }

    fn best_collection(&self) -> PathCollection {
        if self.best_pred.is_empty() {
            return PathCollection::default();
        }
        let mut succ = vec![None; self.graph.edge_count()];
        for (e, p) in self.best_pred.iter().enumerate() {
            if let Some(p) = p {
                succ[p.0] = Some(EdgeId(e));
            }
        }
        self.graph
            .edge_ids()
            .filter(|e| self.best_pred[e.0].is_none())
            .map(|start| {
                let mut edges = vec![start];
                while let Some(next) = succ[edges.last().expect("nonempty").0] {
                    edges.push(next);
                }
                DirectedPath::new(edges)
            })
            .collect()
    }

    /// Upper bound on the gain of settling vertices `order[depth..]`.
    ///
    /// Each unsettled edge is capped at the longest position any chaining can
    /// give it from the current frontier. At each vertex the out-edges can
    /// claim distinct in-edges only, so the heaviest out-edges are paired with
    /// the furthest-reaching in-edges and the rest start fresh paths.
    fn bound(&self, depth: usize) -> ExactScore {
        let mut cap = vec![0u64; self.graph.edge_count()];
        for &e in &self.frontier[depth] {
            cap[e.0] = self.pos[e.0];
        }
        let mut census: Vec<u64> = Vec::new();
        let mut in_caps = Vec::new();
        for &v in &self.order[depth..] {
            in_caps.clear();
            in_caps.extend(self.graph.in_edges(v).iter().map(|e| cap[e.0]));
            in_caps.sort_unstable_by(|a, b| b.cmp(a));
            let reach = in_caps.first().copied().unwrap_or(0) + 1;
            for &e in self.graph.out_edges(v) {
                cap[e.0] = reach;
            }
            for (j, &w) in self.sorted_out_weights[v.0].iter().enumerate() {
                let base = in_caps.get(j).copied().unwrap_or(0) as usize + 2;
                if census.len() <= base {
                    census.resize(base + 1, 0);
                }
                census[base] += w;
            }
        }
        let mut bound = ExactScore::one();
        for (base, &exp) in census.iter().enumerate() {
            bound.mul_power(base as u64, exp);
        }
        bound
    }

    /// Distinct chainings at `v`, up to swapping in-edges of equal position,
    /// best local gain first.
    fn choices(&self, v: VertexId) -> Vec<Choice> {
        let outs = self.graph.out_edges(v);
        let ins = self.graph.in_edges(v);
        let mut used = vec![false; ins.len()];
        let mut links = Vec::with_capacity(outs.len());
        let mut out = Vec::new();
        self.enumerate_links(ins, outs, &mut used, &mut links, &mut out);
        // Stable: equal gains keep enumeration order.
        out.sort_by(|a, b| b.gain.cmp(&a.gain));
        out
    }

    fn enumerate_links(
        &self,
        ins: &[EdgeId],
        outs: &[EdgeId],
        used: &mut Vec<bool>,
        links: &mut Vec<Option<EdgeId>>,
        out: &mut Vec<Choice>,
    ) {
        if links.len() == outs.len() {
            let mut gain = ExactScore::one();
            for (&o, link) in outs.iter().zip(links.iter()) {
                let p = link.map_or(1, |e| self.pos[e.0] + 1);
                gain.mul_power(p + 1, self.graph.edge(o).weight);
            }
            out.push(Choice {
                links: links.clone(),
                gain,
            });
            return;
        }
        let mut tried: Vec<u64> = Vec::new();
        for (i, &e) in ins.iter().enumerate() {
            let p = self.pos[e.0];
            if used[i] || tried.contains(&p) {
                continue;
            }
            tried.push(p);
            used[i] = true;
            links.push(Some(e));
            self.enumerate_links(ins, outs, used, links, out);
            links.pop();
            used[i] = false;
        }
        links.push(None);
        self.enumerate_links(ins, outs, used, links, out);
        links.pop();
    }

    /// True when no completion from here can matter.
    fn hopeless(&self, depth: usize, acc: &ExactScore) -> bool {
        if !self.options.pruning {
            return false;
        }
        let potential = acc * &self.bound(depth);
        match (&self.target, &self.best_score) {
            (Some(t), _) => potential < *t,
            (None, Some(best)) => potential.cmp(best) != Ordering::Greater,
            (None, None) => false,
        }
    }

    /// True when an equal frontier was already reached with at least `acc`.
    fn seen(&mut self, depth: usize, acc: &ExactScore) -> bool {
        if !self.options.memoization {
            return false;
        }
        let key = (depth, self.frontier[depth].iter().map(|e| self.pos[e.0]).collect());
        match self.memo.get_mut(&key) {
            Some(prev) if *prev >= *acc => true,
            Some(prev) => {
                *prev = acc.clone();
                false
            }
            None => {
                self.memo.insert(key, acc.clone());
                false
            }
        }
    }

    fn search(&mut self, depth: usize, acc: ExactScore) {
        if self.done() || !self.tracker.tick() {
            return;
        }
        if depth == self.order.len() {
            let improves = match (&self.target, &self.best_score) {
                (Some(t), _) => acc >= *t || self.first_leaf_only,
                (None, Some(best)) => acc > *best,
                (None, None) => true,
            };
            if improves {
                self.reached = self.target.as_ref().is_some_and(|t| acc >= *t);
                self.best_score = Some(acc);
                self.best_pred = self.pred.clone();
            }
            return;
        }
        if self.hopeless(depth, &acc) || self.seen(depth, &acc) {
            return;
        }
        let v = self.order[depth];
        let outs = self.graph.out_edges(v).to_vec();
        for choice in self.choices(v) {
            for (&o, link) in outs.iter().zip(&choice.links) {
                self.pos[o.0] = link.map_or(1, |e| self.pos[e.0] + 1);
                self.pred[o.0] = *link;
            }
            self.search(depth + 1, &acc * &choice.gain);
            if self.done() {
                break;
            }
        }
        for &o in &outs {
            self.pos[o.0] = 0;
            self.pred[o.0] = None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::score_of_collection;
    use num_bigint::BigUint;

    fn chain(n: usize) -> WeightedDigraph {
        let mut g = WeightedDigraph::new(n + 1);
        for i in 0..n {
            g.add_edge(VertexId(i), VertexId(i + 1), 1).unwrap();
        }
        g
    }

    #[test]
    fn single_edge_is_one_path() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge(VertexId(0), VertexId(1), 3).unwrap();
        let r = exact_ip(&g, SolverBudget::unlimited()).unwrap();
        assert_eq!(r.collection.len(), 1);
        assert_eq!(r.score.materialize(), BigUint::from(8u32));
        assert!(r.optimal);
    }

    #[test]
    fn chaining_beats_splitting() {
        let r = exact_ip(&chain(2), SolverBudget::unlimited()).unwrap();
        assert_eq!(r.collection.len(), 1);
        assert_eq!(r.score.materialize(), BigUint::from(6u32));
    }

    #[test]
    fn diamond_with_tail() {
        // Two routes into vertex 3, one continuation: only one can chain.
        let mut g = WeightedDigraph::new(5);
        g.add_edge(VertexId(0), VertexId(1), 1).unwrap();
        g.add_edge(VertexId(1), VertexId(3), 1).unwrap();
        g.add_edge(VertexId(0), VertexId(2), 1).unwrap();
        g.add_edge(VertexId(2), VertexId(3), 1).unwrap();
        g.add_edge(VertexId(3), VertexId(4), 5).unwrap();
        let r = exact_ip(&g, SolverBudget::unlimited()).unwrap();
        validate_partition(&g, &r.collection).unwrap();
        assert_eq!(score_of_collection(&g, &r.collection).unwrap(), r.score);
        // 2·3·4^5 for the chained path, 2·3 for the other.
        assert_eq!(r.score.materialize(), BigUint::from(6u32 * 1024 * 6));
    }

    #[test]
    fn pruning_and_memo_do_not_change_the_optimum() {
        let mut g = WeightedDigraph::new(5);
        let arcs = [(0, 1, 2), (0, 2, 1), (1, 2, 1), (1, 3, 3), (2, 3, 1), (2, 4, 2), (3, 4, 1), (0, 4, 1)];
        for (u, v, w) in arcs {
            g.add_edge(VertexId(u), VertexId(v), w).unwrap();
        }
        let plain = SearchOptions {
            pruning: false,
            memoization: false,
        };
        let a = exact_ip(&g, SolverBudget::unlimited()).unwrap();
        let b = exact_ip_with(&g, SolverBudget::unlimited(), plain).unwrap();
        assert_eq!(a.score, b.score);
    }

    #[test]
    fn decisions() {
        let g = chain(3);
        let yes = decide_ip(&g, &ExactScore::power(2, 3), SolverBudget::unlimited()).unwrap();
        assert!(matches!(yes.verdict, Verdict::Yes(_)));
        let whole = PathCollection::new(vec![DirectedPath::new(vec![EdgeId(0), EdgeId(1), EdgeId(2)])]);
        let exact = decide_ip(&g, &ExactScore::power(24, 1), SolverBudget::unlimited()).unwrap();
        assert_eq!(exact.verdict, Verdict::Yes(validate_partition(&g, &whole).unwrap()));
        let beyond = decide_ip(&g, &ExactScore::power(5, 2), SolverBudget::unlimited()).unwrap();
        assert_eq!(beyond.verdict, Verdict::No);
        let trivial = decide_ip(&g, &ExactScore::one(), SolverBudget::nodes(0)).unwrap();
        assert!(matches!(trivial.verdict, Verdict::Yes(_)));
        let starved = decide_ip(&g, &ExactScore::power(5, 1), SolverBudget::nodes(0)).unwrap();
        assert_eq!(starved.verdict, Verdict::Unknown);
    }

    #[test]
    fn rejects_cycles() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge(VertexId(0), VertexId(1), 1).unwrap();
        g.add_edge(VertexId(1), VertexId(0), 1).unwrap();
        assert!(matches!(exact_ip(&g, SolverBudget::unlimited()), Err(SolverError::Cyclic(_))));
    }
}
