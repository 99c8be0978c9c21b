//! Exact scoring, solvers, and hardness reductions for interestingness path
//! problems on weighted digraphs.
//!
//! A path `e_1 … e_k` scores `Σ w(e_i) · log2(i + 1)`. Scores are carried as
//! the integer `2^score` in factored form ([`ExactScore`]), so every
//! comparison is exact.

pub mod format;
pub mod graph;
pub mod oracles;
pub mod reductions;
pub mod score;
pub mod solvers;

pub use graph::{
    score_of_collection, score_of_path, validate_collection, validate_partition, DirectedPath, Edge,
    EdgeId, PathCollection, PathPartition, VertexId, WeightedDigraph,
};
pub use score::{compare, ExactScore};
