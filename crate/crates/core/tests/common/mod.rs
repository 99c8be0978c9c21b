#![allow(dead_code)]

use ipaths_core::reductions::{CnfFormula, Literal, SetCoverInstance};
use ipaths_core::{VertexId, WeightedDigraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Forward edges over a random vertex order, so the result is acyclic.
pub fn random_dag(rng: &mut impl Rng, max_vertices: usize, max_edges: usize, max_weight: u64) -> WeightedDigraph {
    let n = rng.gen_range(2..=max_vertices);
    let m = rng.gen_range(1..=max_edges);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut g = WeightedDigraph::new(n);
    for _ in 0..m {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let (u, v) = (a.min(b), a.max(b));
        g.add_edge(VertexId(order[u]), VertexId(order[v]), rng.gen_range(1..=max_weight))
            .unwrap();
    }
    g
}

/// Random normalized 3-CNF; variables may go unused.
pub fn random_cnf(rng: &mut impl Rng, n: usize, m: usize) -> CnfFormula {
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let c: [Literal; 3] =
            std::array::from_fn(|_| Literal::new(rng.gen_range(1..=n), rng.gen_bool(0.5)));
        let taut = c.iter().any(|a| c.iter().any(|b| a.var == b.var && a.positive != b.positive));
        if !taut {
            clauses.push(c);
        }
    }
    CnfFormula::new(n, clauses).unwrap()
}

/// Random (3,2) set system over `n` elements (`n` divisible by 3).
pub fn random_setcover(rng: &mut impl Rng, n: usize, tau: usize) -> SetCoverInstance {
    loop {
        let mut slots: Vec<usize> = (1..=n).flat_map(|x| [x, x]).collect();
        slots.shuffle(rng);
        let sets: Vec<[usize; 3]> = slots.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        if let Ok(sc) = SetCoverInstance::new(n, sets, tau) {
            return sc;
        }
    }
}
