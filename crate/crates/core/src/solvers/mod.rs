//! Exact and approximate solvers for Max-IP, IP, and k-IP.
//!
//! Every score comparison goes through [`ExactScore`], so "optimal" here means
//! optimal for the real-valued objective, not for a rounded proxy.

mod dag;
mod ip;
mod kip;
mod kpaths;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{CycleCertificate, DirectedPath, PathCollection};
use crate::score::ExactScore;

pub use dag::max_ip_dag;
pub use ip::{decide_ip, exact_ip, exact_ip_with};
pub use kip::{decide_kip, exact_kip, exact_kip_with, greedy_kip};
pub use kpaths::enumerate_k_paths;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("graph has a directed cycle through edges {:?}", .0.edges.iter().map(|e| e.0).collect::<Vec<_>>())]
    Cyclic(CycleCertificate),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("k must be at least 1")]
    ZeroK,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxIpResult {
    pub best_path: DirectedPath,
    pub score: ExactScore,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingResult {
    pub collection: PathCollection,
    pub score: ExactScore,
    /// Set only when the search space was exhausted.
    pub optimal: bool,
    pub nodes_explored: u64,
}

/// Search limits; `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverBudget {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<u64>,
}

impl SolverBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(n: u64) -> Self {
        Self {
            max_nodes: Some(n),
            max_seconds: None,
        }
    }
}

/// Knobs for the branch-and-bound searches. Both default to on; turning them
/// off is only useful for checking that pruning never changes an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub pruning: bool,
    pub memoization: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            pruning: true,
            memoization: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Yes(W),
    No,
    /// Budget ran out before either answer was certified.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision<W> {
    pub verdict: Verdict<W>,
    pub nodes_explored: u64,
}

pub(crate) struct BudgetTracker {
    nodes: u64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    exhausted: bool,
}

impl BudgetTracker {
    pub(crate) fn new(budget: SolverBudget) -> Self {
        Self {
            nodes: 0,
            max_nodes: budget.max_nodes,
            deadline: budget
                .max_seconds
                .map(|s| Instant::now() + Duration::from_secs(s)),
            exhausted: false,
        }
    }

    /// Accounts for one search node; false once the budget is spent.
    pub(crate) fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        if self.max_nodes.is_some_and(|m| self.nodes >= m) {
            self.exhausted = true;
            return false;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.exhausted = true;
            return false;
        }
        true
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }
}
