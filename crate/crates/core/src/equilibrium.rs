//! Optimal flows, Nash verification and worst-case equilibria.
//!
//! A flow `f` is a Nash flow when every used path has the common bottleneck
//! cost `B(f)` and the edges with latency at least `B(f)` form an s-t cut. For
//! linear latencies this turns the worst equilibrium into a finite search:
//! for every s-t cut `C`, maximize `B` subject to all edge latencies being at
//! most `B` and the edges of `C` sitting exactly at `B`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::latency::LatencyKind;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::model::{path_bottleneck, Flow, Path, RoutingInstance};
use crate::rational::{one, to_short, zero, Q};
use crate::topology::{self, enumerate_paths, max_flow, PathSet};

/// Outcome of [`is_nash_flow`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NashCertificate {
    pub verdict: bool,
    /// `B(f)`.
    pub bottleneck: Q,
    /// When the verdict holds: the forward edges of the set of nodes reachable
    /// from `s` through edges with latency below `B(f)`. Every edge in it has
    /// latency at least `B(f)`.
    pub blocking_cut: Option<BTreeSet<usize>>,
    /// When the verdict holds: every edge with latency at least `B(f)`.
    pub saturated: Option<BTreeSet<usize>>,
    /// When the verdict fails: an s-t path with bottleneck below `B(f)`.
    pub violation: Option<(Path, Q)>,
}

/// Checks the Nash condition through the cut characterization.
pub fn is_nash_flow(flow: &Flow) -> NashCertificate {
    let g = flow.instance();
    let report = flow.bottleneck_cost();
    let b = report.bottleneck.clone();
    if let Some((p, bp)) = report.path_bottlenecks.iter().find(|(_, bp)| bp < &b) {
        return NashCertificate {
            verdict: false,
            bottleneck: b,
            blocking_cut: None,
            saturated: None,
            violation: Some((p.clone(), bp.clone())),
        };
    }
    let low = |e: usize| report.edge_latencies[e] < b;
    if let Some(p) = g.find_path(low) {
        let bp = path_bottleneck(&report.edge_latencies, &p);
        return NashCertificate {
            verdict: false,
            bottleneck: b,
            blocking_cut: None,
            saturated: None,
            violation: Some((p, bp)),
        };
    }
    let side = g.reachable_from_source(low);
    let cut = g.edges().iter().enumerate().filter(|(_, e)| side[e.tail] && !side[e.head]).map(|(i, _)| i).collect();
    let saturated = (0..g.edge_count()).filter(|&e| !low(e)).collect();
    NashCertificate { verdict: true, bottleneck: b, blocking_cut: Some(cut), saturated: Some(saturated), violation: None }
}

/// The optimal bottleneck cost `B*` and a flow attaining it.
///
/// `B*` is the least level `λ` at which the maximum flow under capacities
/// `c_e⁻¹(λ)` reaches the rate. With linear latencies this is
/// `r / maxflow(1/a_e)`. Otherwise the level is found exactly by iterating
/// over minimum cuts: at a level that is too low, the minimum cut's capacity
/// curve is solved for the rate, which strictly raises the level and retires
/// that cut.
pub fn optimal_bottleneck_cost(instance: &RoutingInstance) -> Result<(Q, Flow)> {
    let r = instance.rate().clone();
    if r.is_zero() {
        return Ok((zero(), Flow::new(instance, vec![])?));
    }
    if instance.is_linear() {
        let unit: Vec<Q> = instance.edges().iter().map(|e| one() / e.latency.linear_slope().unwrap()).collect();
        let throughput = max_flow(instance, &unit).value;
        let level = &r / &throughput;
        let caps: Vec<Q> = unit.iter().map(|u| u * &level).collect();
        let witness = flow_at_level(instance, &caps)?;
        return Ok((level, witness));
    }
    let mut level = zero();
    loop {
        let caps: Vec<Q> = instance.edges().iter().map(|e| e.latency.capacity_at(&level, &r)).collect();
        let mf = max_flow(instance, &caps);
        if mf.value >= r {
            return Ok((level, flow_at_level(instance, &caps)?));
        }
        let cut: Vec<usize> = (0..instance.edge_count())
            .filter(|&e| {
                let edge = instance.edge(e);
                mf.source_side[edge.tail] && !mf.source_side[edge.head]
            })
            .collect();
        let next = cut_root(instance, &cut, &r);
        debug_assert!(next > level, "cut iteration must make progress");
        level = next;
    }
}

/// Decomposes a maximum flow under `caps` and scales it down to the rate.
fn flow_at_level(instance: &RoutingInstance, caps: &[Q]) -> Result<Flow> {
    let mf = max_flow(instance, caps);
    let r = instance.rate();
    let paths = topology::decompose_edge_flow(instance, &mf.edge_flows);
    let scale = r / &mf.value;
    Flow::new(instance, paths.into_iter().map(|(p, x)| (p, x * &scale)).collect())
}

/// Least level at which the capacities of `cut` sum to `r`.
fn cut_root(instance: &RoutingInstance, cut: &[usize], r: &Q) -> Q {
    let total = |level: &Q| -> Q { cut.iter().map(|&e| instance.edge(e).latency.capacity_at(level, r)).sum() };
    let mut points: Vec<Q> = cut.iter().flat_map(|&e| instance.edge(e).latency.capacity_breakpoints(r)).collect();
    points.sort();
    points.dedup();
    let first = points.iter().position(|p| &total(p) >= r).expect("every cut carries the rate at full capacity");
    if first == 0 {
        return points[0].clone();
    }
    let (lo, hi) = (&points[first - 1], &points[first]);
    let at_lo = total(lo);
    let mid = (lo + hi) / Q::from_integer(2.into());
    let slope = (total(&mid) - &at_lo) / (&mid - lo);
    if slope.is_positive() {
        let root = lo + (r - &at_lo) / slope;
        if &root < hi {
            return root;
        }
    }
    hi.clone()
}

/// Cost, sorted cut ids, cut index and verified flow of one cut program.
type CutCandidate = (Q, Vec<String>, usize, Flow);

/// Worst Nash flow of a linear instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorstNashResult {
    pub flow: Flow,
    /// `B(G, r)`.
    pub cost: Q,
    /// The cut whose program attained the maximum.
    pub cut: BTreeSet<usize>,
    /// All s-t cuts were examined.
    pub exhaustive: bool,
    pub cuts_examined: usize,
}

/// The worst equilibrium bottleneck cost `B(G, r)` with a certified flow.
///
/// Requires strictly increasing linear latencies. Every s-t cut is examined;
/// its program is solved over simple-path flows, and the resulting flow is
/// re-verified with [`is_nash_flow`]. Ties go to the lexicographically
/// smallest cut (by edge ids).
pub fn worst_nash_flow(instance: &RoutingInstance) -> Result<WorstNashResult> {
    require_linear(instance, "the worst-Nash oracle")?;
    let paths = enumerate_paths(instance)?;
    worst_nash_with_paths(instance, &paths)
}

pub(crate) fn require_linear(instance: &RoutingInstance, what: &str) -> Result<()> {
    match instance.edges().iter().find(|e| e.latency.kind() != LatencyKind::Linear) {
        Some(e) => Err(Error::UnsupportedModel(format!(
            "{what} needs linear latencies; edge `{}` has {}",
            e.id, e.latency
        ))),
        None => Ok(()),
    }
}

pub(crate) fn worst_nash_with_paths(instance: &RoutingInstance, paths: &PathSet) -> Result<WorstNashResult> {
    let cuts = topology::enumerate_st_cuts(instance)?;
    let mut on_path = vec![false; instance.edge_count()];
    for p in paths.iter() {
        for &e in p {
            on_path[e] = true;
        }
    }
    let rate_positive = instance.rate().is_positive();
    let candidates: Vec<Option<CutCandidate>> = cuts
        .par_iter()
        .enumerate()
        .map(|(i, cut)| {
            // a cut edge off every path carries nothing and cannot sit at a positive cost
            if rate_positive && cut.iter().any(|&e| !on_path[e]) {
                return None;
            }
            let flow = solve_cut_program(instance, paths, cut, &on_path)?;
            let cert = is_nash_flow(&flow);
            if !cert.verdict {
                return None;
            }
            let ids = sorted_ids(instance, cut);
            Some((cert.bottleneck, ids, i, flow))
        })
        .collect();
    let best = candidates
        .into_iter()
        .flatten()
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
        .ok_or_else(|| Error::Infeasible("no cut yields a certified Nash flow".into()))?;
    let (cost, _, i, flow) = best;
    Ok(WorstNashResult { flow, cost, cut: cuts[i].clone(), exhaustive: true, cuts_examined: cuts.len() })
}

fn sorted_ids(instance: &RoutingInstance, edges: &BTreeSet<usize>) -> Vec<String> {
    let mut ids: Vec<String> = edges.iter().map(|&e| instance.edge(e).id.clone()).collect();
    ids.sort();
    ids
}

/// maximize B s.t. Σ f_p = r, a_e·f_e ≤ B on path edges, a_e·f_e = B on the cut.
fn solve_cut_program(instance: &RoutingInstance, paths: &PathSet, cut: &BTreeSet<usize>, on_path: &[bool]) -> Option<Flow> {
    let k = paths.len();
    let b_var = k;
    let mut objective = vec![zero(); k + 1];
    objective[b_var] = one();
    let mut lp = LinearProgram::new(k + 1).maximize(objective);
    let mut row = vec![one(); k + 1];
    row[b_var] = zero();
    lp.constrain(row, Relation::Eq, instance.rate().clone());
    for (e, edge) in instance.edges().iter().enumerate() {
        if !on_path[e] {
            continue;
        }
        let a = edge.latency.linear_slope().expect("linear instance");
        let mut row: Vec<Q> = paths.iter().map(|p| if p.contains(&e) { a.clone() } else { zero() }).collect();
        row.push(-one());
        let rel = if cut.contains(&e) { Relation::Eq } else { Relation::Le };
        lp.constrain(row, rel, zero());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => {
            let flows = paths.iter().cloned().zip(x).filter(|(_, v)| v.is_positive()).collect();
            Flow::new(instance, flows).ok()
        }
        _ => None,
    }
}

/// Per-node minimum bottleneck cost from the source under a flow's loads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubpathLabels {
    /// Indexed by node; `None` for nodes unreachable from the source.
    pub labels: Vec<Option<Q>>,
}

/// Whether every prefix of every used path attains the minimum bottleneck
/// cost to its end node.
pub fn is_subpath_optimal(flow: &Flow) -> bool {
    let g = flow.instance();
    let lat = g.latencies(&flow.edge_loads());
    let labels = g.min_bottleneck_labels(&lat);
    flow.paths().iter().all(|(p, _)| {
        let mut prefix = zero();
        p.iter().all(|&e| {
            if lat[e] > prefix {
                prefix = lat[e].clone();
            }
            labels[g.edge(e).head].as_ref() == Some(&prefix)
        })
    })
}

/// A subpath-optimal Nash flow, which always attains `B*`.
///
/// Built as the flow whose sorted latency vector is lexicographically
/// smallest: minimize the largest edge latency, freeze every edge that cannot
/// go below that level, and repeat on the rest. With strictly increasing
/// latencies any prefix that is costlier than the best route to its end node
/// could be rerouted to lower that vector, so the result is subpath-optimal,
/// and it carries no circulation. Requires linear latencies.
pub fn subpath_optimal_nash_flow(instance: &RoutingInstance) -> Result<(Flow, SubpathLabels)> {
    require_linear(instance, "the subpath-optimal construction")?;
    let loads = leximin_loads(instance)?;
    let paths = topology::decompose_edge_flow(instance, &loads);
    let flow = Flow::new(instance, paths)?;
    let lat = instance.latencies(&flow.edge_loads());
    let labels = SubpathLabels { labels: instance.min_bottleneck_labels(&lat) };
    if !is_subpath_optimal(&flow) {
        return Err(Error::Infeasible("leximin flow failed the subpath-optimality check".into()));
    }
    Ok((flow, labels))
}

/// An optimal flow that is also a Nash flow.
pub fn optimal_nash_flow(instance: &RoutingInstance) -> Result<Flow> {
    let (_, witness) = optimal_bottleneck_cost(instance)?;
    if is_nash_flow(&witness).verdict {
        return Ok(witness);
    }
    subpath_optimal_nash_flow(instance).map(|(f, _)| f)
}

fn leximin_loads(instance: &RoutingInstance) -> Result<Vec<Q>> {
    let m = instance.edge_count();
    let n = instance.node_count();
    let level_var = m;
    let slope = |e: usize| instance.edge(e).latency.linear_slope().unwrap().clone();
    let mut fixed: Vec<Option<Q>> = vec![None; m];

    let base = |fixed: &[Option<Q>], level: Option<&Q>, objective: Vec<Q>| {
        let mut lp = LinearProgram::new(m + 1).maximize(objective);
        for v in 0..n {
            if v == instance.sink() {
                continue;
            }
            let mut row = vec![zero(); m + 1];
            for &e in instance.out_edges(v) {
                row[e] += one();
            }
            for &e in instance.in_edges(v) {
                row[e] -= one();
            }
            let rhs = if v == instance.source() { instance.rate().clone() } else { zero() };
            lp.constrain(row, Relation::Eq, rhs);
        }
        for e in 0..m {
            let mut row = vec![zero(); m + 1];
            match &fixed[e] {
                Some(x) => {
                    row[e] = one();
                    lp.constrain(row, Relation::Eq, x.clone());
                }
                None => {
                    row[e] = slope(e);
                    match level {
                        Some(l) => lp.constrain(row, Relation::Le, l.clone()),
                        None => {
                            row[level_var] = -one();
                            lp.constrain(row, Relation::Le, zero());
                        }
                    }
                }
            }
        }
        lp
    };

    while fixed.iter().any(Option::is_none) {
        let mut objective = vec![zero(); m + 1];
        objective[level_var] = -one();
        let (level, x) = match base(&fixed, None, objective).solve() {
            LpOutcome::Optimal { x, .. } => (x[level_var].clone(), x),
            other => return Err(Error::Infeasible(format!("leximin stage program: {other:?}"))),
        };
        let mut frozen = 0;
        for e in 0..m {
            if fixed[e].is_some() {
                continue;
            }
            // already below the level in the stage optimum: it can go lower
            if slope(e) * &x[e] < level {
                continue;
            }
            let mut objective = vec![zero(); m + 1];
            objective[e] = -slope(e);
            let lowest = match base(&fixed, Some(&level), objective).solve() {
                LpOutcome::Optimal { value, .. } => -value,
                other => return Err(Error::Infeasible(format!("leximin edge program: {other:?}"))),
            };
            if lowest >= level {
                fixed[e] = Some(&level / slope(e));
                frozen += 1;
            }
        }
        if frozen == 0 {
            return Err(Error::Infeasible(format!("leximin made no progress at level {}", to_short(&level))));
        }
    }
    Ok(fixed.into_iter().map(Option::unwrap).collect())
}

/// `ρ(G) = B(G, r) / B*(G)`. Requires linear latencies and a positive rate.
pub fn price_of_anarchy(instance: &RoutingInstance) -> Result<Q> {
    let worst = worst_nash_flow(instance)?;
    let (opt, _) = optimal_bottleneck_cost(instance)?;
    if opt.is_zero() {
        return Err(Error::Degenerate("optimal bottleneck cost is zero".into()));
    }
    Ok(worst.cost / opt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{parallel_links, path_network, theta};
    use crate::latency::LatencyFunction;
    use crate::model::InstanceBuilder;
    use crate::rational::{q, qi};

    fn ids(g: &RoutingInstance, set: &BTreeSet<usize>) -> BTreeSet<String> {
        set.iter().map(|&e| g.edge(e).id.clone()).collect()
    }

    fn strs(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn theta_optimum() {
        let g = theta(qi(1));
        let (opt, w) = optimal_bottleneck_cost(&g).unwrap();
        assert_eq!(opt, q(1, 2));
        assert_eq!(w.cost(), q(1, 2));
    }

    #[test]
    fn unequal_parallel_links() {
        let g = parallel_links(&[qi(1), qi(2)], qi(1));
        let (opt, w) = optimal_bottleneck_cost(&g).unwrap();
        assert_eq!(opt, q(2, 3));
        let loads = w.edge_loads();
        assert_eq!(loads, vec![q(2, 3), q(1, 3)]);
    }

    #[test]
    fn theta_nash_certificates() {
        let g = theta(qi(1));
        let zig = Flow::from_ids(&g, &[(vec!["su", "uv", "vt"], qi(1))]).unwrap();
        let cert = is_nash_flow(&zig);
        assert!(cert.verdict);
        assert_eq!(ids(&g, cert.blocking_cut.as_ref().unwrap()), strs(&["su", "vt"]));

        let top = Flow::from_ids(&g, &[(vec!["su", "ut"], qi(1))]).unwrap();
        let cert = is_nash_flow(&top);
        assert!(!cert.verdict);
        let (p, b) = cert.violation.unwrap();
        assert_eq!(g.path_ids(&p), vec!["sv", "vt"]);
        assert_eq!(b, qi(0));
    }

    #[test]
    fn theta_without_bridge() {
        let g = theta(qi(1));
        let h = g.subnetwork_by_ids(&["su", "ut", "sv", "vt"]).unwrap();
        let f = Flow::from_ids(&h, &[(vec!["su", "ut"], q(1, 2)), (vec!["sv", "vt"], q(1, 2))]).unwrap();
        let cert = is_nash_flow(&f);
        assert!(cert.verdict);
        assert_eq!(ids(&h, cert.saturated.as_ref().unwrap()), strs(&["su", "ut", "sv", "vt"]));
    }

    #[test]
    fn theta_worst_nash() {
        let g = theta(qi(1));
        let w = worst_nash_flow(&g).unwrap();
        assert_eq!(w.cost, qi(1));
        assert!(is_nash_flow(&w.flow).verdict);
        assert_eq!(w.flow.cost(), w.cost);
        assert_eq!(price_of_anarchy(&g).unwrap(), qi(2));
    }

    #[test]
    fn identical_parallel_links_unique_nash() {
        let g = parallel_links(&[qi(1), qi(1)], qi(1));
        assert_eq!(worst_nash_flow(&g).unwrap().cost, q(1, 2));
    }

    #[test]
    fn worst_nash_rejects_affine() {
        let g = InstanceBuilder::new("s", "t")
            .edge("e", "s", "t", LatencyFunction::affine(qi(1), qi(1)).unwrap())
            .build()
            .unwrap();
        assert!(matches!(worst_nash_flow(&g), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn subpath_optimal_theta() {
        let g = theta(qi(1));
        let (f, labels) = subpath_optimal_nash_flow(&g).unwrap();
        assert_eq!(f.cost(), q(1, 2));
        assert_eq!(f.path_flow(&g.path_from_ids(&["su", "ut"]).unwrap()), q(1, 2));
        assert_eq!(f.path_flow(&g.path_from_ids(&["sv", "vt"]).unwrap()), q(1, 2));
        assert_eq!(labels.labels[g.source()], Some(qi(0)));
    }

    #[test]
    fn subpath_optimal_single_path_labels() {
        let g = path_network(&[qi(2), qi(1), qi(3)], qi(1));
        let (f, labels) = subpath_optimal_nash_flow(&g).unwrap();
        assert_eq!(f.support_size(), 1);
        let prefix_max = [qi(0), qi(2), qi(2), qi(3)];
        let order = ["s", "x1", "x2", "t"];
        for (name, want) in order.iter().zip(prefix_max) {
            assert_eq!(labels.labels[g.node_index(name).unwrap()], Some(want));
        }
    }

    #[test]
    fn affine_optimum_is_exact() {
        // c1 = x + 1, c2 = 2x: B = 1 + x1 = 2 x2, x1 + x2 = 1 → x2 = 2/3, B = 4/3
        let g = InstanceBuilder::new("s", "t")
            .edge("a", "s", "t", LatencyFunction::affine(qi(1), qi(1)).unwrap())
            .edge("b", "s", "t", LatencyFunction::affine(qi(2), qi(0)).unwrap())
            .build()
            .unwrap();
        let (opt, w) = optimal_bottleneck_cost(&g).unwrap();
        assert_eq!(opt, q(4, 3));
        assert_eq!(w.cost(), q(4, 3));
    }

    #[test]
    fn affine_constant_edge_blocks_until_its_level() {
        // a constant-latency edge with cost 1 beside c = 4x at rate 1:
        // below level 1 only the steep edge carries flow (cap level/4 < 1/4 < 1)
        let g = InstanceBuilder::new("s", "t")
            .edge("flat", "s", "t", LatencyFunction::affine(qi(0), qi(1)).unwrap())
            .edge("steep", "s", "t", LatencyFunction::affine(qi(4), qi(0)).unwrap())
            .build()
            .unwrap();
        let (opt, w) = optimal_bottleneck_cost(&g).unwrap();
        assert_eq!(opt, qi(1));
        assert!(w.cost() <= qi(1));
    }

    #[test]
    fn table_optimum_is_exact() {
        // c1 = table (0,0)-(1,1)-(2,3) and c2 = x; rate 2:
        // at level 1 the table carries 1 and the linear edge 1
        let tab = LatencyFunction::table(vec![(qi(0), qi(0)), (qi(1), qi(1)), (qi(2), qi(3))]).unwrap();
        let g = InstanceBuilder::new("s", "t")
            .edge("tab", "s", "t", tab)
            .edge("lin", "s", "t", LatencyFunction::affine(qi(1), qi(0)).unwrap())
            .rate(qi(2))
            .build()
            .unwrap();
        let (opt, w) = optimal_bottleneck_cost(&g).unwrap();
        assert_eq!(opt, qi(1));
        assert_eq!(w.cost(), qi(1));
    }

    #[test]
    fn zero_rate_everything_zero() {
        let g = theta(qi(0));
        assert_eq!(optimal_bottleneck_cost(&g).unwrap().0, qi(0));
        assert_eq!(worst_nash_flow(&g).unwrap().cost, qi(0));
        assert!(matches!(price_of_anarchy(&g), Err(Error::Degenerate(_))));
    }
}
