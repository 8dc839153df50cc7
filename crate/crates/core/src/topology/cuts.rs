use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::RoutingInstance;

/// Default bound on the node count for cut enumeration.
pub const DEFAULT_CUT_NODE_BOUND: usize = 24;

/// Forward edge sets of all bipartitions `(S, V∖S)` with `s ∈ S`, `t ∉ S`.
pub fn enumerate_st_cuts(instance: &RoutingInstance) -> Result<Vec<BTreeSet<usize>>> {
    enumerate_st_cuts_with_bound(instance, DEFAULT_CUT_NODE_BOUND)
}

/// As [`enumerate_st_cuts`] with an explicit node bound. The result is
/// deduplicated and sorted.
pub fn enumerate_st_cuts_with_bound(instance: &RoutingInstance, max_nodes: usize) -> Result<Vec<BTreeSet<usize>>> {
    let n = instance.node_count();
    if n > max_nodes {
        return Err(Error::capacity("node count for cut enumeration", n as u128, max_nodes as u128));
    }
    let free: Vec<usize> = (0..n).filter(|&v| v != instance.source() && v != instance.sink()).collect();
    let mut cuts = BTreeSet::new();
    let mut side = vec![false; n];
    side[instance.source()] = true;
    for mask in 0u64..(1u64 << free.len()) {
        for (i, &v) in free.iter().enumerate() {
            side[v] = mask >> i & 1 == 1;
        }
        let forward: BTreeSet<usize> = instance
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| side[e.tail] && !side[e.head])
            .map(|(i, _)| i)
            .collect();
        cuts.insert(forward);
    }
    Ok(cuts.into_iter().collect())
}
