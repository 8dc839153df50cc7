use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::equilibrium::require_linear;
use crate::error::{Error, Result};
use crate::model::{Flow, RoutingInstance};
use crate::rational::{to_short, Q};
use crate::topology::enumerate_paths;

use super::sparse::{enumerate_candidate_flows, k_of_eps, CandidateFlow, LogBase};

/// Default cap on the number of enumerated candidate multisets.
pub const DEFAULT_MAX_CANDIDATES: u128 = 20_000_000;

/// Parameters of the candidate-enumeration scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxParams {
    pub eps: Q,
    /// Lower bound on the used-edge flows of the best subnetwork's worst Nash
    /// flow.
    pub delta: Q,
    /// Lipschitz constant shared by all latencies.
    pub xi: Q,
    pub log_base: LogBase,
    pub max_candidates: u128,
}

impl ApproxParams {
    pub fn new(eps: Q, delta: Q, xi: Q) -> Result<Self> {
        for (name, v) in [("eps", &eps), ("delta", &delta), ("xi", &xi)] {
            if v <= &crate::rational::zero() {
                return Err(Error::Domain(format!("{name} must be positive, got {}", to_short(v))));
            }
        }
        Ok(Self { eps, delta, xi, log_base: LogBase::Natural, max_candidates: DEFAULT_MAX_CANDIDATES })
    }

    /// `min{δ, ε/(4ξ)}`.
    pub fn eps1(&self) -> Q {
        let b = &self.eps / (Q::from_integer(4.into()) * &self.xi);
        if self.delta < b {
            self.delta.clone()
        } else {
            b
        }
    }

    /// `ε/2`.
    pub fn eps2(&self) -> Q {
        &self.eps / Q::from_integer(2.into())
    }

    /// `k(ε1)` for a network with `m` edges.
    pub fn k(&self, m: usize) -> Result<u64> {
        k_of_eps(&self.eps1(), m, self.log_base)
    }
}

/// Output of [`approx_best_subnetwork`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxResult {
    /// Edge ids of the chosen subnetwork `H`, sorted.
    pub subnetwork: Vec<String>,
    /// The maximizing candidate flow, on the subnetwork.
    pub flow: Flow,
    /// The multiset behind `flow`, as edge-id paths with multiplicities.
    pub multiset: Vec<(Vec<String>, u64)>,
    /// `B̃(H)`, equal to `B(flow)`.
    pub b_tilde: Q,
    pub k: u64,
    pub eps1: Q,
    pub eps2: Q,
    /// Multisets enumerated.
    pub candidates: u128,
    /// Distinct (support, ε2-violating paths) classes among them.
    pub candidate_classes: usize,
    pub candidate_subnetworks: usize,
}

struct Class {
    support_edges: u64,
    cost: Q,
    counts: Vec<u32>,
}

/// Enumerates every candidate flow on at most `k(ε1)` paths, forms the
/// subnetworks used by some candidate, and returns the subnetwork minimizing
/// `B̃(H)`: the largest cost of a candidate whose support lies in `H` and
/// which is an `ε/2`-Nash flow of `H`. Ties go to fewer edges, then to the
/// lexicographically smaller id list; among flows attaining `B̃(H)` the first
/// one enumerated is reported.
///
/// Requires rate 1 and linear latencies, for which all comparisons are exact.
pub fn approx_best_subnetwork(instance: &RoutingInstance, params: &ApproxParams) -> Result<ApproxResult> {
    require_linear(instance, "the approximation scheme")?;
    if !instance.rate().is_one() {
        return Err(Error::Domain(format!(
            "the approximation scheme needs rate 1, got {}",
            to_short(instance.rate())
        )));
    }
    let m = instance.edge_count();
    if m > 64 {
        return Err(Error::capacity("edge count", m as u128, 64));
    }
    let paths = enumerate_paths(instance)?;
    if paths.len() > 128 {
        return Err(Error::capacity("path count", paths.len() as u128, 128));
    }
    let k = params.k(m)?;
    let stream = enumerate_candidate_flows(&paths, k, params.max_candidates)?;
    let candidates = stream.total();

    // integer slopes: latency of e under multiset size n is A_e·L_e / (n·D)
    let overflow = || Error::Domain("slopes too large for exact candidate evaluation".into());
    let slopes: Vec<&Q> = instance.edges().iter().map(|e| e.latency.linear_slope().unwrap()).collect();
    let denom = slopes.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()));
    let scale = denom.to_i128().ok_or_else(overflow)?;
    let big_a: Vec<i128> = slopes
        .iter()
        .map(|a| (a.numer() * (&denom / a.denom())).to_i128().ok_or_else(overflow))
        .collect::<Result<_>>()?;
    let eps2 = params.eps2();
    let (e2n, e2d) = (eps2.numer().to_i128().ok_or_else(overflow)?, eps2.denom().to_i128().ok_or_else(overflow)?);
    let edge_masks: Vec<u64> = paths.iter().map(|p| p.iter().fold(0u64, |a, &e| a | (1 << e))).collect();

    let mut classes: HashMap<(u128, u128), Class> = HashMap::new();
    let mut order: Vec<(u128, u128)> = Vec::new();
    let mut loads = vec![0i128; m];
    let mut bottlenecks = vec![0i128; paths.len()];
    for counts in stream {
        if counts.iter().fold(0u32, |g, &c| g.gcd(&c)) > 1 {
            continue;
        }
        let n: i128 = counts.iter().map(|&c| c as i128).sum();
        loads.iter_mut().for_each(|l| *l = 0);
        for (p, &c) in paths.iter().zip(&counts) {
            if c > 0 {
                for &e in p {
                    loads[e] += c as i128;
                }
            }
        }
        let mut supp = 0u128;
        let mut supp_edges = 0u64;
        let mut cost = 0i128;
        for (i, p) in paths.iter().enumerate() {
            let b = p.iter().map(|&e| big_a[e].checked_mul(loads[e])).try_fold(0i128, |acc, x| x.map(|x| acc.max(x)));
            bottlenecks[i] = b.ok_or_else(overflow)?;
            if counts[i] > 0 {
                supp |= 1 << i;
                supp_edges |= edge_masks[i];
                cost = cost.max(bottlenecks[i]);
            }
        }
        // p is ε2-violating when b_p < B − ε2, i.e. e2d·b_p < e2d·B − e2n·n·D
        let rhs = e2d
            .checked_mul(cost)
            .zip(e2n.checked_mul(n).and_then(|x| x.checked_mul(scale)))
            .and_then(|(a, b)| a.checked_sub(b))
            .ok_or_else(overflow)?;
        let mut bad = 0u128;
        for (i, &b) in bottlenecks.iter().enumerate() {
            if e2d.checked_mul(b).ok_or_else(overflow)? < rhs {
                bad |= 1 << i;
            }
        }
        let cost_q = Q::new(cost.into(), (n * scale).into());
        match classes.get_mut(&(supp, bad)) {
            Some(c) => {
                if cost_q > c.cost {
                    c.cost = cost_q;
                    c.counts = counts;
                }
            }
            None => {
                order.push((supp, bad));
                classes.insert((supp, bad), Class { support_edges: supp_edges, cost: cost_q, counts });
            }
        }
    }

    let mut subnetworks: Vec<u64> = classes.values().map(|c| c.support_edges).collect();
    subnetworks.sort_by_key(|&h| (h.count_ones(), sorted_ids(instance, h)));
    subnetworks.dedup();

    let mut best: Option<(Q, u64, (u128, u128))> = None;
    for &h in &subnetworks {
        let within: u128 =
            edge_masks.iter().enumerate().filter(|(_, &pm)| pm & !h == 0).fold(0, |a, (i, _)| a | (1 << i));
        let mut b_tilde: Option<(&Q, (u128, u128))> = None;
        for key in &order {
            let c = &classes[key];
            let (supp, bad) = *key;
            if supp & !within == 0 && bad & within == 0 && b_tilde.is_none_or(|(b, _)| &c.cost > b) {
                b_tilde = Some((&c.cost, *key));
            }
        }
        if let Some((b, key)) = b_tilde {
            if best.as_ref().is_none_or(|(cur, _, _)| b < cur) {
                best = Some((b.clone(), h, key));
            }
        }
    }
    let (b_tilde, h, key) = best.ok_or_else(|| {
        Error::Infeasible("no candidate flow is an ε/2-Nash flow of any candidate subnetwork".into())
    })?;
    let candidate = CandidateFlow::from_counts(instance, &paths, &classes[&key].counts)?;
    let sub = instance.subnetwork(|e| h & (1 << e) != 0)?;
    let flow = candidate.flow.transfer(&sub)?;
    debug_assert_eq!(flow.cost(), b_tilde);
    Ok(ApproxResult {
        subnetwork: sorted_ids(instance, h),
        flow,
        multiset: candidate.counts.iter().map(|(p, c)| (instance.path_ids(p), *c)).collect(),
        b_tilde,
        k,
        eps1: params.eps1(),
        eps2,
        candidates,
        candidate_classes: classes.len(),
        candidate_subnetworks: subnetworks.len(),
    })
}

fn sorted_ids(instance: &RoutingInstance, mask: u64) -> Vec<String> {
    let mut ids: Vec<String> =
        (0..instance.edge_count()).filter(|e| mask & (1 << e) != 0).map(|e| instance.edge(e).id.clone()).collect();
    ids.sort();
    ids
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{parallel_links, path_network, theta};
    use crate::rational::{q, qi};

    #[test]
    fn derived_parameters() {
        let p = ApproxParams::new(q(1, 2), q(1, 4), qi(1)).unwrap();
        assert_eq!(p.eps1(), q(1, 8));
        assert_eq!(p.eps2(), q(1, 4));
        let p = ApproxParams::new(qi(1), q(1, 4), q(1, 2)).unwrap();
        assert_eq!(p.eps1(), q(1, 4));
        assert!(ApproxParams::new(qi(0), qi(1), qi(1)).is_err());
    }

    #[test]
    fn identical_parallel_links() {
        let g = parallel_links(&[qi(1), qi(1)], qi(1));
        let p = ApproxParams::new(qi(1), q(1, 4), qi(1)).unwrap();
        let r = approx_best_subnetwork(&g, &p).unwrap();
        assert_eq!(r.subnetwork, vec!["e0", "e1"]);
        assert!(r.b_tilde <= q(1, 2) + qi(1));
        assert!(r.flow.is_eps_nash(&r.eps2));
    }

    #[test]
    fn theta_within_bounds() {
        let g = theta(qi(1));
        let p = ApproxParams::new(q(1, 2), q(1, 4), qi(1)).unwrap();
        let r = approx_best_subnetwork(&g, &p).unwrap();
        let h = g.subnetwork_by_ids(&r.subnetwork).unwrap();
        let worst = crate::equilibrium::worst_nash_flow(&h).unwrap().cost;
        assert!(worst <= q(1, 2) + q(5, 8));
        assert!(r.flow.is_eps_nash(&q(1, 4)));
    }

    #[test]
    fn single_path_network() {
        let g = path_network(&[qi(1), q(1, 2)], qi(1));
        let p = ApproxParams::new(q(1, 2), q(1, 2), qi(1)).unwrap();
        let r = approx_best_subnetwork(&g, &p).unwrap();
        assert_eq!(r.b_tilde, qi(1));
        assert_eq!(r.multiset, vec![(vec!["e0".to_string(), "e1".to_string()], 1)]);
    }

    #[test]
    fn rejects_other_rates() {
        let g = theta(qi(2));
        let p = ApproxParams::new(q(1, 2), q(1, 4), qi(1)).unwrap();
        assert!(matches!(approx_best_subnetwork(&g, &p), Err(Error::Domain(_))));
    }
}
