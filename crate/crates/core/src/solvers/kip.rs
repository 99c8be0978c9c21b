use std::cmp::Ordering;

use crate::graph::{unchecked_path_score, DirectedPath, EdgeId, PathCollection, WeightedDigraph};
use crate::score::ExactScore;

use super::{
    enumerate_k_paths, BudgetTracker, Decision, PackingResult, SearchOptions, SolverBudget,
    SolverError, Verdict,
};

struct Candidate {
    edges: Vec<EdgeId>,
    score: ExactScore,
}

/// k-paths sorted by descending score, ties in lexicographic edge order.
fn candidates(graph: &WeightedDigraph, k: usize) -> Vec<Candidate> {
    let mut cands: Vec<Candidate> = enumerate_k_paths(graph, k)
        .into_iter()
        .map(|p| Candidate {
            score: unchecked_path_score(graph, p.edges()),
            edges: p.edges().to_vec(),
        })
        .collect();
    // Stable: equal scores keep the lexicographic enumeration order.
    cands.sort_by(|a, b| b.score.cmp(&a.score));
    cands
}

/// Repeatedly takes the best remaining k-path and deletes its edges.
///
/// Each optimal path shares an edge with the first greedy path that blocked
/// it, and was still available (hence no better) when that path was taken; a
/// greedy path has `k` edges, so it blocks at most `k` optimal paths.
pub fn greedy_kip(graph: &WeightedDigraph, k: usize) -> Result<PackingResult, SolverError> {
    if k == 0 {
        return Err(SolverError::ZeroK);
    }
    let cands = candidates(graph, k);
    let mut used = vec![false; graph.edge_count()];
    let mut collection = PathCollection::default();
    let mut score = ExactScore::one();
    for c in &cands {
        if c.edges.iter().all(|e| !used[e.0]) {
            for e in &c.edges {
                used[e.0] = true;
            }
            score *= &c.score;
            collection.push(DirectedPath::new(c.edges.clone()));
        }
    }
    Ok(PackingResult {
        collection,
        score,
        optimal: false,
        nodes_explored: cands.len() as u64,
    })
}

pub fn exact_kip(
    graph: &WeightedDigraph,
    k: usize,
    budget: SolverBudget,
) -> Result<PackingResult, SolverError> {
    exact_kip_with(graph, k, budget, SearchOptions::default())
}

pub fn exact_kip_with(
    graph: &WeightedDigraph,
    k: usize,
    budget: SolverBudget,
    options: SearchOptions,
) -> Result<PackingResult, SolverError> {
    if k == 0 {
        return Err(SolverError::ZeroK);
    }
    let greedy = greedy_kip(graph, k)?;
    let mut search = PackingSearch::new(graph, k, budget, options, Goal::Maximize);
    search.best_score = greedy.score.clone();
    search.best = greedy.collection.paths().iter().map(|p| p.edges().to_vec()).collect();
    search.run();
    Ok(search.into_result())
}

/// Is there an edge-disjoint set of k-paths scoring at least `target`?
pub fn decide_kip(
    graph: &WeightedDigraph,
    k: usize,
    target: &ExactScore,
    budget: SolverBudget,
) -> Result<Decision<PathCollection>, SolverError> {
    if k == 0 {
        return Err(SolverError::ZeroK);
    }
    if target.is_one() {
        return Ok(Decision {
            verdict: Verdict::Yes(PathCollection::default()),
            nodes_explored: 0,
        });
    }
    let mut search = PackingSearch::new(
        graph,
        k,
        budget,
        SearchOptions::default(),
        Goal::Reach(target.clone()),
    );
    search.run();
    let nodes_explored = search.tracker.nodes();
    let verdict = if search.reached {
        Verdict::Yes(search.into_result().collection)
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

enum Goal {
    Maximize,
    Reach(ExactScore),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EdgeState {
    Free,
    Used,
    Dead,
}

/// Branch and bound over which k-paths to take.
///
/// Each node picks the free edge with the fewest still-available candidate
/// paths and branches on every such candidate, then on leaving the edge
/// unused. Two admissible bounds are maintained, and a node is pruned as soon
/// as either falls short:
///
/// * per edge, `w(e) · log(p + 1)` with `p` the furthest position `e` takes in
///   any available candidate;
/// * per edge, `1/k` of the best available candidate through it, which is
///   exact for unit weights and reduces to the edge-count bound.
struct PackingSearch<'a> {
    graph: &'a WeightedDigraph,
    k: u64,
    cands: Vec<Candidate>,
    /// Candidates through each edge, in candidate order.
    through: Vec<Vec<(usize, u64)>>,
    /// Number of non-free edges in each candidate.
    blocked: Vec<usize>,
    state: Vec<EdgeState>,
    chosen: Vec<usize>,
    goal: Goal,
    options: SearchOptions,
    tracker: BudgetTracker,
    best_score: ExactScore,
    best: Vec<Vec<EdgeId>>,
    reached: bool,
}

impl<'a> PackingSearch<'a> {
    fn new(
        graph: &'a WeightedDigraph,
        k: usize,
        budget: SolverBudget,
        options: SearchOptions,
        goal: Goal,
    ) -> Self {
        let cands = candidates(graph, k);
        let mut through = vec![Vec::new(); graph.edge_count()];
        for (ci, c) in cands.iter().enumerate() {
            for (pos, e) in c.edges.iter().enumerate() {
                through[e.0].push((ci, pos as u64 + 1));
            }
        }
        Self {
            graph,
            k: k as u64,
            blocked: vec![0; cands.len()],
            cands,
            through,
            state: vec![EdgeState::Free; graph.edge_count()],
            chosen: Vec::new(),
            goal,
            options,
            tracker: BudgetTracker::new(budget),
            best_score: ExactScore::one(),
            best: Vec::new(),
            reached: false,
        }
    }

    fn run(&mut self) {
        self.search(ExactScore::one());
    }

    fn into_result(self) -> PackingResult {
        let optimal = !self.tracker.exhausted() && matches!(self.goal, Goal::Maximize);
        PackingResult {
            collection: self.best.into_iter().map(DirectedPath::new).collect(),
            score: self.best_score,
            optimal,
            nodes_explored: self.tracker.nodes(),
        }
    }

    fn set_state(&mut self, e: EdgeId, to: EdgeState) {
        let from = std::mem::replace(&mut self.state[e.0], to);
        let delta: isize = match (from == EdgeState::Free, to == EdgeState::Free) {
            (true, false) => 1,
            (false, true) => -1,
            _ => 0,
        };
        if delta != 0 {
            for &(ci, _) in &self.through[e.0] {
                self.blocked[ci] = (self.blocked[ci] as isize + delta) as usize;
            }
        }
    }

    fn record(&mut self, acc: &ExactScore) {
        self.best_score = acc.clone();
        self.best = self.chosen.iter().map(|&c| self.cands[c].edges.clone()).collect();
    }

    /// True when the subtree cannot beat the incumbent (or reach the target).
    fn hopeless(&self, acc: &ExactScore) -> bool {
        if !self.options.pruning {
            return false;
        }
        let mut by_position = ExactScore::one();
        let mut by_share = ExactScore::one();
        for (ei, through) in self.through.iter().enumerate() {
            if self.state[ei] != EdgeState::Free {
                continue;
            }
            let mut furthest = 0;
            let mut best_path = None;
            for &(ci, pos) in through {
                if self.blocked[ci] == 0 {
                    furthest = furthest.max(pos);
                    best_path.get_or_insert(ci);
                }
            }
            if let Some(ci) = best_path {
                by_position.mul_power(furthest + 1, self.graph.edge(EdgeId(ei)).weight);
                by_share *= &self.cands[ci].score;
            }
        }
        let (threshold, strict) = match &self.goal {
            Goal::Maximize => (&self.best_score, false),
            Goal::Reach(t) => (t, true),
        };
        // Maximizing needs bound > incumbent; reaching needs bound ≥ target.
        let fails = |ord: Ordering| if strict { ord == Ordering::Less } else { ord != Ordering::Greater };
        if fails((acc * &by_position).cmp(threshold)) {
            return true;
        }
        fails((acc.pow(self.k) * by_share).cmp(&threshold.pow(self.k)))
    }

    fn search(&mut self, acc: ExactScore) {
        if self.reached || !self.tracker.tick() {
            return;
        }
        if let Goal::Reach(t) = &self.goal {
            if acc >= *t {
                self.reached = true;
                self.record(&acc);
                return;
            }
        }
        // Branch on the free edge with the fewest available candidates.
        let mut pick: Option<(usize, usize)> = None;
        for (ei, through) in self.through.iter().enumerate() {
            if self.state[ei] != EdgeState::Free {
                continue;
            }
            let avail = through.iter().filter(|&&(ci, _)| self.blocked[ci] == 0).count();
            if avail > 0 && pick.is_none_or(|(_, n)| avail < n) {
                pick = Some((ei, avail));
            }
        }
        let Some((edge, _)) = pick else {
            if matches!(self.goal, Goal::Maximize) && acc > self.best_score {
                self.record(&acc);
            }
            return;
        };
        if self.hopeless(&acc) {
            return;
        }
        let options: Vec<usize> = self.through[edge]
            .iter()
            .filter(|&&(ci, _)| self.blocked[ci] == 0)
            .map(|&(ci, _)| ci)
            .collect();
        for ci in options {
            let edges = self.cands[ci].edges.clone();
            for &e in &edges {
                self.set_state(e, EdgeState::Used);
            }
            self.chosen.push(ci);
            let next = &acc * &self.cands[ci].score;
            self.search(next);
            self.chosen.pop();
            for &e in &edges {
                self.set_state(e, EdgeState::Free);
            }
            if self.reached || self.tracker.exhausted() {
                return;
            }
        }
        self.set_state(EdgeId(edge), EdgeState::Dead);
        self.search(acc);
        self.set_state(EdgeId(edge), EdgeState::Free);
    }
}
