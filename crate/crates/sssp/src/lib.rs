//! Deterministic single-source shortest paths for directed graphs with
//! non-negative real weights, in the comparison-addition model.
//!
//! The main solver beats the sorting bottleneck of Dijkstra's algorithm by
//! recursively shrinking frontiers to pivots and partially sorting work
//! through a block-sequence structure. A Dijkstra oracle, a lemma-level
//! verification mode, and operation-count benchmarking round it out.

pub mod bench;
pub mod block_seq;
pub mod dimacs;
pub mod generate;
pub mod graph;
pub mod heap;
pub mod oracle;
pub mod order;
pub mod pivots;
pub mod select;
pub mod solver;
pub mod state;

pub use block_seq::BlockSeq;
pub use graph::{build_graph, to_constant_degree, Graph};
pub use oracle::{dijkstra, verify, VerifyReport};
pub use order::{Bound, OpCounters, PathKey};
pub use solver::{compute_params, solve_sssp, SolveOptions, SolveReport};
