//! Best-subnetwork search: the exhaustive oracle, paradox classification,
//! sparse flows and the candidate-enumeration approximation scheme.

mod approx;
mod exhaustive;
mod sparse;

pub use approx::{approx_best_subnetwork, ApproxParams, ApproxResult, DEFAULT_MAX_CANDIDATES};
pub use exhaustive::{
    classify_paradox, exhaustive_best_subnetwork, exhaustive_best_subnetwork_with_bound, Classification,
    SubnetworkReport, DEFAULT_MAX_EDGES,
};
pub use sparse::{
    count_candidate_flows, enumerate_candidate_flows, k_of_eps, sparsify_flow, sparsify_flow_with, CandidateFlow,
    CandidateStream, LogBase,
};
