//! Structural graph algorithms: simple paths, s-t cuts, maximum flow and
//! series-parallel recognition.

mod cuts;
mod maxflow;
mod paths;
mod series_parallel;

pub use cuts::{enumerate_st_cuts, enumerate_st_cuts_with_bound, DEFAULT_CUT_NODE_BOUND};
pub use maxflow::{max_flow, MaxFlow};
pub(crate) use maxflow::decompose_edge_flow;
pub use paths::{enumerate_paths, enumerate_paths_with_cap, PathSet, DEFAULT_MAX_PATHS};
pub use series_parallel::{series_parallel_decompose, SpNode, SpTree};
