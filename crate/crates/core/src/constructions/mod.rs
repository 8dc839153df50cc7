//! Hardness gadgets built from 2-directed-disjoint-paths instances: the base
//! gap network, its recursive amplification, the good-subnetwork predicate,
//! saturation rates and the explicit witness flows.

mod ddp;
mod gap;
mod witness;

pub use ddp::{
    classify_2ddp, classify_2ddp_with_bound, contains_good_subnetwork, is_good_subnetwork, DdpVerdict, TwoDDPInstance,
    DEFAULT_DDP_NODE_BOUND,
};
pub use gap::{
    amplify_gap, build_gap_network, build_gap_tower, default_eps, rebuild_gap, saturation_rate, DCopy, GapNetwork,
};
pub use witness::{build_witness_flows, good_subnetwork_ids, WitnessFlow, WitnessRole};
