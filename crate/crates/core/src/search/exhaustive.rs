use std::fmt;

use num_traits::Zero;

use crate::equilibrium::{optimal_bottleneck_cost, require_linear, worst_nash_with_paths};
use crate::error::{Error, Result};
use crate::model::{Flow, RoutingInstance};
use crate::rational::{one, Q};
use crate::topology::enumerate_paths;

/// Default cap on the edge count for the exhaustive search.
pub const DEFAULT_MAX_EDGES: usize = 16;

/// How much edge removal can lower the worst equilibrium cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// No subnetwork beats the full network.
    ParadoxFree,
    /// Some subnetwork brings the worst equilibrium down to the optimum.
    ParadoxRidden,
    Intermediate,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::ParadoxFree => "paradox-free",
            Classification::ParadoxRidden => "paradox-ridden",
            Classification::Intermediate => "intermediate",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of the exhaustive best-subnetwork search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubnetworkReport {
    /// Edge ids of the best subnetwork `H*`, sorted.
    pub subnetwork: Vec<String>,
    /// `B(H*, r)`.
    pub worst_cost: Q,
    /// A worst Nash flow of `H*`.
    pub witness: Flow,
    pub classification: Classification,
    /// `B(G, r) / B(H*, r)`; 1 when both vanish.
    pub improvement: Q,
    /// `B(G, r)`.
    pub full_worst_cost: Q,
    /// `B*(G)`.
    pub optimal_cost: Q,
    /// Subnetworks that are unions of s-t paths (the only ones whose
    /// equilibria can differ).
    pub subnetworks_considered: usize,
    /// Of those, how many needed a worst-Nash solve.
    pub subnetworks_solved: usize,
}

/// [`exhaustive_best_subnetwork_with_bound`] with at most 16 edges.
pub fn exhaustive_best_subnetwork(instance: &RoutingInstance) -> Result<SubnetworkReport> {
    exhaustive_best_subnetwork_with_bound(instance, DEFAULT_MAX_EDGES)
}

/// Minimizes the worst equilibrium cost over all subnetworks with an s-t path.
///
/// Edges that lie on no s-t path of a subnetwork never carry flow and never
/// separate `s` from `t`, so removing them leaves the Nash flows unchanged;
/// only subnetworks that are unions of paths are solved. A subnetwork whose
/// optimum `B*(H)` already exceeds the best cost found cannot win and is
/// skipped. Ties go to fewer edges, then to the lexicographically smaller
/// sorted id list.
pub fn exhaustive_best_subnetwork_with_bound(instance: &RoutingInstance, max_edges: usize) -> Result<SubnetworkReport> {
    require_linear(instance, "the exhaustive search")?;
    let m = instance.edge_count();
    if m > max_edges {
        return Err(Error::capacity("edge count", m as u128, max_edges as u128));
    }
    let paths = enumerate_paths(instance)?;
    let path_masks: Vec<u32> = paths.iter().map(|p| p.iter().fold(0u32, |acc, &e| acc | (1 << e))).collect();

    // unions of paths, smallest first so ties resolve towards fewer edges
    let mut unions: Vec<u32> = (1u32..(1u32 << m))
        .filter(|&h| {
            let covered = path_masks.iter().filter(|&&pm| pm & h == pm).fold(0u32, |a, &pm| a | pm);
            covered == h
        })
        .collect();
    unions.sort_by_key(|&h| (h.count_ones(), sorted_ids(instance, h)));

    let full = worst_nash_with_paths(instance, &paths)?;
    let (optimal_cost, _) = optimal_bottleneck_cost(instance)?;

    let mut best: Option<(Q, u32, Flow)> = None;
    let mut solved = 0;
    for &h in &unions {
        let sub = instance.subnetwork(|e| h & (1 << e) != 0)?;
        let (lower, _) = optimal_bottleneck_cost(&sub)?;
        if best.as_ref().is_some_and(|(b, _, _)| &lower >= b) {
            continue;
        }
        let sub_paths = enumerate_paths(&sub)?;
        let res = worst_nash_with_paths(&sub, &sub_paths)?;
        solved += 1;
        if best.as_ref().is_none_or(|(b, _, _)| &res.cost < b) {
            best = Some((res.cost, h, res.flow));
        }
    }
    let (worst_cost, h, witness) = best.expect("the full network's path union is a candidate");
    let full_worst_cost = full.cost;
    let classification = classify(&worst_cost, &full_worst_cost, &optimal_cost);
    let improvement = if worst_cost.is_zero() { one() } else { &full_worst_cost / &worst_cost };
    Ok(SubnetworkReport {
        subnetwork: sorted_ids(instance, h),
        worst_cost,
        witness,
        classification,
        improvement,
        full_worst_cost,
        optimal_cost,
        subnetworks_considered: unions.len(),
        subnetworks_solved: solved,
    })
}

fn classify(best: &Q, full: &Q, optimal: &Q) -> Classification {
    if best == full {
        Classification::ParadoxFree
    } else if best == optimal {
        Classification::ParadoxRidden
    } else {
        Classification::Intermediate
    }
}

fn sorted_ids(instance: &RoutingInstance, mask: u32) -> Vec<String> {
    let mut ids: Vec<String> =
        (0..instance.edge_count()).filter(|e| mask & (1 << e) != 0).map(|e| instance.edge(e).id.clone()).collect();
    ids.sort();
    ids
}

/// Classifies an instance as paradox-free, paradox-ridden or intermediate,
/// with the improvement ratio achievable by edge removal.
pub fn classify_paradox(instance: &RoutingInstance) -> Result<SubnetworkReport> {
    exhaustive_best_subnetwork(instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{parallel_links, path_network, theta};
    use crate::rational::{q, qi};

    #[test]
    fn theta_is_paradox_ridden() {
        let r = exhaustive_best_subnetwork(&theta(qi(1))).unwrap();
        assert_eq!(r.subnetwork, vec!["su", "sv", "ut", "vt"]);
        assert_eq!(r.worst_cost, q(1, 2));
        assert_eq!(r.classification, Classification::ParadoxRidden);
        assert_eq!(r.improvement, qi(2));
        assert_eq!(r.full_worst_cost, qi(1));
    }

    #[test]
    fn parallel_links_are_paradox_free() {
        let r = classify_paradox(&parallel_links(&[qi(1), qi(2)], qi(1))).unwrap();
        assert_eq!(r.classification, Classification::ParadoxFree);
        assert_eq!(r.improvement, qi(1));
        assert_eq!(r.worst_cost, q(2, 3));
        assert_eq!(r.subnetwork, vec!["e0", "e1"]);
    }

    #[test]
    fn single_path_is_its_own_best() {
        let r = classify_paradox(&path_network(&[qi(1), qi(3)], qi(2))).unwrap();
        assert_eq!(r.worst_cost, qi(6));
        assert_eq!(r.classification, Classification::ParadoxFree);
        assert_eq!(r.subnetworks_considered, 1);
    }

    #[test]
    fn edge_bound() {
        let g = parallel_links(&vec![qi(1); 5], qi(1));
        assert!(matches!(exhaustive_best_subnetwork_with_bound(&g, 4), Err(Error::Capacity { .. })));
    }
}
