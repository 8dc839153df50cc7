//! The routing game model: networks, flows and bottleneck costs.
//!
//! A [`RoutingInstance`] is an immutable directed s-t network with one latency
//! function per edge and a traffic rate. A [`Flow`] assigns traffic to simple
//! s-t paths; edge loads and costs are always derived from the path flows.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::latency::{LatencyFunction, LatencyKind};
use crate::rational::{to_short, zero, Q};

/// A simple s-t path as a sequence of edge indices.
pub type Path = Vec<usize>;

/// A directed edge of a routing instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub latency: LatencyFunction,
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    nodes: Vec<String>,
    source: usize,
    sink: usize,
    edges: Vec<Edge>,
    rate: Q,
    node_ix: HashMap<String, usize>,
    edge_ix: HashMap<String, usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

/// An s-t network with latency functions and a traffic rate.
///
/// Cloning is cheap; the data is shared.
#[derive(Clone, PartialEq, Eq)]
pub struct RoutingInstance(Arc<Inner>);

impl fmt::Debug for RoutingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RoutingInstance")
            .field("nodes", &self.0.nodes.len())
            .field("edges", &self.0.edges.len())
            .field("rate", &to_short(&self.0.rate))
            .finish()
    }
}

/// Incrementally assembles a [`RoutingInstance`]. Nodes are registered in
/// first-seen order.
#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    nodes: Vec<String>,
    source: String,
    sink: String,
    edges: Vec<(String, String, String, LatencyFunction)>,
    rate: Q,
}

impl InstanceBuilder {
    pub fn new(source: &str, sink: &str) -> Self {
        let mut b = Self {
            nodes: Vec::new(),
            source: source.to_string(),
            sink: sink.to_string(),
            edges: Vec::new(),
            rate: crate::rational::one(),
        };
        b.add_node(source);
        b.add_node(sink);
        b
    }

    pub fn node(mut self, name: &str) -> Self {
        self.add_node(name);
        self
    }

    fn add_node(&mut self, name: &str) {
        if !self.nodes.iter().any(|n| n == name) {
            self.nodes.push(name.to_string());
        }
    }

    pub fn edge(mut self, id: &str, tail: &str, head: &str, latency: LatencyFunction) -> Self {
        self.add_node(tail);
        self.add_node(head);
        self.edges.push((id.to_string(), tail.to_string(), head.to_string(), latency));
        self
    }

    pub fn rate(mut self, rate: Q) -> Self {
        self.rate = rate;
        self
    }

    pub fn build(self) -> Result<RoutingInstance> {
        RoutingInstance::new(self.nodes, &self.source, &self.sink, self.edges, self.rate)
    }
}

impl RoutingInstance {
    /// Validates and builds an instance. Edges are `(id, tail, head, latency)`.
    pub fn new(
        nodes: Vec<String>,
        source: &str,
        sink: &str,
        edges: Vec<(String, String, String, LatencyFunction)>,
        rate: Q,
    ) -> Result<Self> {
        let mut node_ix = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if node_ix.insert(n.clone(), i).is_some() {
                return Err(Error::Structure(format!("duplicate node `{n}`")));
            }
        }
        let lookup = |name: &str| {
            node_ix
                .get(name)
                .copied()
                .ok_or_else(|| Error::Structure(format!("reference to unknown node `{name}`")))
        };
        let s = lookup(source)?;
        let t = lookup(sink)?;
        if s == t {
            return Err(Error::Structure("source and sink coincide".into()));
        }
        if rate.is_negative() {
            return Err(Error::Domain(format!("negative rate {}", to_short(&rate))));
        }
        let mut edge_ix = HashMap::with_capacity(edges.len());
        let mut built = Vec::with_capacity(edges.len());
        for (id, tail, head, latency) in edges {
            let tail = lookup(&tail)?;
            let head = lookup(&head)?;
            if tail == head {
                return Err(Error::Structure(format!("self-loop `{id}`")));
            }
            if let Some(max) = latency.domain_max() {
                if max < &rate {
                    return Err(Error::Domain(format!(
                        "latency of `{id}` is defined on [0, {}] but the rate is {}",
                        to_short(max),
                        to_short(&rate)
                    )));
                }
            }
            if edge_ix.insert(id.clone(), built.len()).is_some() {
                return Err(Error::Structure(format!("duplicate edge id `{id}`")));
            }
            built.push(Edge { id, tail, head, latency });
        }
        let n = nodes.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, e) in built.iter().enumerate() {
            out[e.tail].push(i);
            inc[e.head].push(i);
        }
        let inst = Self(Arc::new(Inner {
            nodes,
            source: s,
            sink: t,
            edges: built,
            rate,
            node_ix,
            edge_ix,
            out,
            inc,
        }));
        if !inst.reachable_from_source(|_| true)[t] {
            return Err(Error::Structure("no s-t path".into()));
        }
        Ok(inst)
    }

    pub fn nodes(&self) -> &[String] {
        &self.0.nodes
    }

    pub fn node_count(&self) -> usize {
        self.0.nodes.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.0.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.0.edges[i]
    }

    pub fn edge_count(&self) -> usize {
        self.0.edges.len()
    }

    pub fn source(&self) -> usize {
        self.0.source
    }

    pub fn sink(&self) -> usize {
        self.0.sink
    }

    pub fn rate(&self) -> &Q {
        &self.0.rate
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.0.node_ix.get(name).copied()
    }

    pub fn node_name(&self, i: usize) -> &str {
        &self.0.nodes[i]
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.0.edge_ix.get(id).copied()
    }

    pub fn out_edges(&self, node: usize) -> &[usize] {
        &self.0.out[node]
    }

    pub fn in_edges(&self, node: usize) -> &[usize] {
        &self.0.inc[node]
    }

    /// True when every latency is linear (`a·x`, `a > 0`).
    pub fn is_linear(&self) -> bool {
        self.edges().iter().all(|e| e.latency.kind() == LatencyKind::Linear)
    }

    /// The least Lipschitz constant shared by all edges.
    pub fn max_xi(&self) -> Q {
        self.edges().iter().map(|e| e.latency.xi().clone()).max().unwrap_or_else(zero)
    }

    fn rebuild(&self, edges: Vec<(String, String, String, LatencyFunction)>, rate: Q) -> Result<Self> {
        Self::new(self.0.nodes.clone(), self.node_name(self.source()), self.node_name(self.sink()), edges, rate)
    }

    fn edge_tuples(&self, mut f: impl FnMut(&Edge) -> Option<LatencyFunction>) -> Vec<(String, String, String, LatencyFunction)> {
        self.edges()
            .iter()
            .filter_map(|e| {
                f(e).map(|lat| (e.id.clone(), self.node_name(e.tail).to_string(), self.node_name(e.head).to_string(), lat))
            })
            .collect()
    }

    /// Same network and latencies at another rate.
    pub fn with_rate(&self, rate: Q) -> Result<Self> {
        self.rebuild(self.edge_tuples(|e| Some(e.latency.clone())), rate)
    }

    /// The subnetwork keeping the edges for which `keep` holds. Nodes, source
    /// and sink are preserved; edge ids are preserved.
    pub fn subnetwork(&self, keep: impl Fn(usize) -> bool) -> Result<Self> {
        let mut i = 0;
        let edges = self.edge_tuples(|e| {
            let k = keep(i);
            i += 1;
            k.then(|| e.latency.clone())
        });
        self.rebuild(edges, self.rate().clone())
    }

    /// The subnetwork keeping exactly the listed edge ids.
    pub fn subnetwork_by_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Self> {
        let mut keep = vec![false; self.edge_count()];
        for id in ids {
            let i = self
                .edge_index(id.as_ref())
                .ok_or_else(|| Error::Structure(format!("unknown edge `{}`", id.as_ref())))?;
            keep[i] = true;
        }
        self.subnetwork(|i| keep[i])
    }

    /// Nodes reachable from the source using edges accepted by `usable`.
    pub fn reachable_from_source(&self, usable: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::from([self.source()]);
        seen[self.source()] = true;
        while let Some(u) = queue.pop_front() {
            for &e in self.out_edges(u) {
                let h = self.edge(e).head;
                if usable(e) && !seen[h] {
                    seen[h] = true;
                    queue.push_back(h);
                }
            }
        }
        seen
    }

    /// Some simple s-t path using only edges accepted by `usable`, by BFS.
    pub fn find_path(&self, usable: impl Fn(usize) -> bool) -> Option<Path> {
        let n = self.node_count();
        let mut via: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[self.source()] = true;
        let mut queue = VecDeque::from([self.source()]);
        while let Some(u) = queue.pop_front() {
            if u == self.sink() {
                break;
            }
            for &e in self.out_edges(u) {
                let h = self.edge(e).head;
                if usable(e) && !seen[h] {
                    seen[h] = true;
                    via[h] = Some(e);
                    queue.push_back(h);
                }
            }
        }
        if !seen[self.sink()] {
            return None;
        }
        let mut path = Vec::new();
        let mut v = self.sink();
        while let Some(e) = via[v] {
            path.push(e);
            v = self.edge(e).tail;
        }
        path.reverse();
        Some(path)
    }

    /// Checks that `path` is a simple s-t path of this instance.
    pub fn validate_path(&self, path: &[usize]) -> Result<()> {
        let bad = |msg: &str| Err(Error::Feasibility(format!("{msg}: {}", self.describe_path(path))));
        if path.is_empty() {
            return bad("empty path");
        }
        if path.iter().any(|&e| e >= self.edge_count()) {
            return Err(Error::Feasibility("edge index out of range".into()));
        }
        if self.edge(path[0]).tail != self.source() || self.edge(*path.last().unwrap()).head != self.sink() {
            return bad("path does not connect source to sink");
        }
        let mut visited = HashSet::from([self.source()]);
        for w in path.windows(2) {
            if self.edge(w[0]).head != self.edge(w[1]).tail {
                return bad("path is not contiguous");
            }
        }
        for &e in path {
            if !visited.insert(self.edge(e).head) {
                return bad("path is not simple");
            }
        }
        Ok(())
    }

    /// Resolves a path given by edge ids.
    pub fn path_from_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Path> {
        ids.iter()
            .map(|id| {
                self.edge_index(id.as_ref())
                    .ok_or_else(|| Error::Feasibility(format!("unknown edge `{}`", id.as_ref())))
            })
            .collect()
    }

    pub fn path_ids(&self, path: &[usize]) -> Vec<String> {
        path.iter().map(|&e| self.edge(e).id.clone()).collect()
    }

    pub fn describe_path(&self, path: &[usize]) -> String {
        let ids: Vec<&str> = path.iter().filter(|&&e| e < self.edge_count()).map(|&e| self.edge(e).id.as_str()).collect();
        format!("({})", ids.join(","))
    }

    /// Orders two paths lexicographically by their edge-id sequences.
    pub fn cmp_paths(&self, a: &[usize], b: &[usize]) -> Ordering {
        let ia = a.iter().map(|&e| self.edge(e).id.as_str());
        let ib = b.iter().map(|&e| self.edge(e).id.as_str());
        ia.cmp(ib)
    }

    /// Latency of every edge under the given loads.
    pub fn latencies(&self, loads: &[Q]) -> Vec<Q> {
        self.edges().iter().zip(loads).map(|(e, x)| e.latency.eval(x)).collect()
    }

    /// Minimum bottleneck cost over s-u paths for every node `u` (`None` when
    /// unreachable) given per-edge latencies. The source gets label 0.
    pub fn min_bottleneck_labels(&self, latencies: &[Q]) -> Vec<Option<Q>> {
        let n = self.node_count();
        let mut label: Vec<Option<Q>> = vec![None; n];
        let mut done = vec![false; n];
        label[self.source()] = Some(zero());
        loop {
            let next = (0..n)
                .filter(|&v| !done[v] && label[v].is_some())
                .min_by(|&a, &b| label[a].cmp(&label[b]));
            let Some(u) = next else { break };
            done[u] = true;
            let lu = label[u].clone().unwrap();
            for &e in self.out_edges(u) {
                let h = self.edge(e).head;
                let cand = if latencies[e] > lu { latencies[e].clone() } else { lu.clone() };
                if label[h].as_ref().is_none_or(|l| &cand < l) {
                    label[h] = Some(cand);
                }
            }
        }
        label
    }
}

/// Maximum latency along a path.
pub fn path_bottleneck(latencies: &[Q], path: &[usize]) -> Q {
    path.iter().map(|&e| &latencies[e]).max().cloned().unwrap_or_else(zero)
}

/// A feasible flow: nonnegative amounts on simple s-t paths summing to the rate.
///
/// Paths with zero flow are dropped; the remaining paths are kept in
/// lexicographic order of their edge-id sequences.
#[derive(Clone, PartialEq, Eq)]
pub struct Flow {
    instance: RoutingInstance,
    paths: Vec<(Path, Q)>,
}

impl fmt::Debug for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (p, x) in &self.paths {
            m.entry(&self.instance.describe_path(p), &to_short(x));
        }
        m.finish()
    }
}

impl Flow {
    /// Validates feasibility: every path simple s-t, amounts nonnegative and
    /// summing exactly to the rate. Repeated paths are merged.
    pub fn new(instance: &RoutingInstance, paths: Vec<(Path, Q)>) -> Result<Self> {
        let mut merged: Vec<(Path, Q)> = Vec::with_capacity(paths.len());
        let mut total = zero();
        for (p, x) in paths {
            if x.is_negative() {
                return Err(Error::Feasibility(format!("negative flow on {}", instance.describe_path(&p))));
            }
            instance.validate_path(&p)?;
            total += &x;
            if x.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some((_, y)) => *y += x,
                None => merged.push((p, x)),
            }
        }
        if &total != instance.rate() {
            return Err(Error::Feasibility(format!(
                "path flows sum to {} but the rate is {}",
                to_short(&total),
                to_short(instance.rate())
            )));
        }
        merged.sort_by(|a, b| instance.cmp_paths(&a.0, &b.0));
        Ok(Self { instance: instance.clone(), paths: merged })
    }

    /// Builds a flow from paths given as edge-id sequences.
    pub fn from_ids<S: AsRef<str>>(instance: &RoutingInstance, paths: &[(Vec<S>, Q)]) -> Result<Self> {
        let resolved = paths
            .iter()
            .map(|(ids, x)| Ok((instance.path_from_ids(ids)?, x.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(instance, resolved)
    }

    /// The whole rate on one path.
    pub fn single_path(instance: &RoutingInstance, path: Path) -> Result<Self> {
        Self::new(instance, vec![(path, instance.rate().clone())])
    }

    pub fn instance(&self) -> &RoutingInstance {
        &self.instance
    }

    pub fn rate(&self) -> &Q {
        self.instance.rate()
    }

    /// Used paths with their flow, in canonical order.
    pub fn paths(&self) -> &[(Path, Q)] {
        &self.paths
    }

    pub fn path_flow(&self, path: &[usize]) -> Q {
        self.paths.iter().find(|(p, _)| p == path).map(|(_, x)| x.clone()).unwrap_or_else(zero)
    }

    /// Number of used paths.
    pub fn support_size(&self) -> usize {
        self.paths.len()
    }

    /// Moves the flow to another instance sharing the used edge ids (for
    /// example a subnetwork or a rescaled copy with the same rate).
    pub fn transfer(&self, to: &RoutingInstance) -> Result<Flow> {
        let ids: Vec<(Vec<String>, Q)> =
            self.paths.iter().map(|(p, x)| (self.instance.path_ids(p), x.clone())).collect();
        Flow::from_ids(to, &ids)
    }

    /// Flow routed through each edge, indexed by edge.
    pub fn edge_loads(&self) -> Vec<Q> {
        let mut loads = vec![zero(); self.instance.edge_count()];
        for (p, x) in &self.paths {
            for &e in p {
                loads[e] += x;
            }
        }
        loads
    }

    /// Edge loads keyed by edge id.
    pub fn edge_loads_by_id(&self) -> Vec<(String, Q)> {
        self.edge_loads()
            .into_iter()
            .enumerate()
            .map(|(i, x)| (self.instance.edge(i).id.clone(), x))
            .collect()
    }

    /// Edge latencies, path bottlenecks and the flow's bottleneck cost.
    pub fn bottleneck_cost(&self) -> CostReport {
        let edge_latencies = self.instance.latencies(&self.edge_loads());
        let path_bottlenecks: Vec<(Path, Q)> =
            self.paths.iter().map(|(p, _)| (p.clone(), path_bottleneck(&edge_latencies, p))).collect();
        let bottleneck = path_bottlenecks.iter().map(|(_, b)| b).max().cloned().unwrap_or_else(zero);
        CostReport { edge_latencies, path_bottlenecks, bottleneck }
    }

    /// The bottleneck cost `B(f)`.
    pub fn cost(&self) -> Q {
        self.bottleneck_cost().bottleneck
    }

    /// Whether every used path's bottleneck is within `eps` of every s-t path's
    /// bottleneck under this flow's loads.
    pub fn is_eps_nash(&self, eps: &Q) -> bool {
        let report = self.bottleneck_cost();
        let labels = self.instance.min_bottleneck_labels(&report.edge_latencies);
        let best = labels[self.instance.sink()].clone().expect("instances have an s-t path");
        report.bottleneck <= best + eps
    }
}

/// Costs induced by a flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    /// `c_e(f_e)` indexed by edge.
    pub edge_latencies: Vec<Q>,
    /// Bottleneck of every used path.
    pub path_bottlenecks: Vec<(Path, Q)>,
    /// Maximum bottleneck over used paths; zero for the empty flow.
    pub bottleneck: Q,
}

/// Replaces every latency `c_e(x)` with `α·c_e(x)`.
pub fn scale_latencies(instance: &RoutingInstance, alpha: &Q) -> Result<RoutingInstance> {
    if !alpha.is_positive() {
        return Err(Error::Domain(format!("scaling factor must be positive, got {}", to_short(alpha))));
    }
    instance.rebuild(instance.edge_tuples(|e| Some(e.latency.scaled(alpha))), instance.rate().clone())
}

/// Rescales a rate-`r` instance to rate 1 by replacing `c_e(x)` with `c_e(r·x)`.
/// A flow `f` of the original corresponds to `f / r` here.
pub fn normalize_rate(instance: &RoutingInstance) -> Result<RoutingInstance> {
    let r = instance.rate();
    if !r.is_positive() {
        return Err(Error::Domain("cannot normalize a zero rate".into()));
    }
    instance.rebuild(instance.edge_tuples(|e| Some(e.latency.rate_scaled(r))), crate::rational::one())
}

/// Divides every path flow by the rate, giving the matching flow on
/// [`normalize_rate`]'s output.
pub fn normalize_flow(flow: &Flow, normalized: &RoutingInstance) -> Result<Flow> {
    let r = flow.rate().clone();
    let ids: Vec<(Vec<String>, Q)> =
        flow.paths().iter().map(|(p, x)| (flow.instance().path_ids(p), x / &r)).collect();
    Flow::from_ids(normalized, &ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::theta;
    use crate::rational::{q, qi};

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn theta_all_on_zigzag() {
        let g = theta(qi(1));
        let f = Flow::from_ids(&g, &[(ids(&["su", "uv", "vt"]), qi(1))]).unwrap();
        let loads: HashMap<String, Q> = f.edge_loads_by_id().into_iter().collect();
        assert_eq!(loads["su"], qi(1));
        assert_eq!(loads["uv"], qi(1));
        assert_eq!(loads["vt"], qi(1));
        assert_eq!(loads["ut"], qi(0));
        assert_eq!(loads["sv"], qi(0));
        assert_eq!(f.cost(), qi(1));
    }

    #[test]
    fn theta_split() {
        let g = theta(qi(1));
        let f = Flow::from_ids(&g, &[(ids(&["su", "ut"]), q(1, 2)), (ids(&["sv", "vt"]), q(1, 2))]).unwrap();
        let loads: HashMap<String, Q> = f.edge_loads_by_id().into_iter().collect();
        for e in ["su", "ut", "sv", "vt"] {
            assert_eq!(loads[e], q(1, 2));
        }
        assert_eq!(loads["uv"], qi(0));
        assert_eq!(f.cost(), q(1, 2));
        assert!(f.is_eps_nash(&qi(0)));
    }

    #[test]
    fn zero_rate_flow_is_empty() {
        let g = theta(qi(0));
        let f = Flow::new(&g, vec![]).unwrap();
        assert!(f.edge_loads().iter().all(|x| x.is_zero()));
        assert_eq!(f.cost(), qi(0));
    }

    #[test]
    fn single_edge_cost() {
        let g = InstanceBuilder::new("s", "t")
            .edge("e", "s", "t", LatencyFunction::linear(qi(2)).unwrap())
            .rate(qi(3))
            .build()
            .unwrap();
        let f = Flow::single_path(&g, vec![0]).unwrap();
        assert_eq!(f.cost(), qi(6));
    }

    #[test]
    fn infeasible_flows_rejected() {
        let g = theta(qi(1));
        let short = Flow::from_ids(&g, &[(ids(&["su", "ut"]), q(1, 2))]);
        assert!(matches!(short, Err(Error::Feasibility(_))));
        let broken = Flow::from_ids(&g, &[(ids(&["su", "vt"]), qi(1))]);
        assert!(matches!(broken, Err(Error::Feasibility(_))));
        let neg = Flow::from_ids(&g, &[(ids(&["su", "ut"]), qi(2)), (ids(&["sv", "vt"]), qi(-1))]);
        assert!(matches!(neg, Err(Error::Feasibility(_))));
    }

    #[test]
    fn eps_nash_on_theta() {
        let g = theta(qi(1));
        let f = Flow::from_ids(&g, &[(ids(&["su", "ut"]), qi(1))]).unwrap();
        assert!(!f.is_eps_nash(&q(1, 2)));
        assert!(f.is_eps_nash(&qi(1)));
    }

    #[test]
    fn scaling_theta() {
        let g = theta(qi(1));
        let g3 = scale_latencies(&g, &qi(3)).unwrap();
        let f = Flow::from_ids(&g3, &[(ids(&["su", "ut"]), q(1, 2)), (ids(&["sv", "vt"]), q(1, 2))]).unwrap();
        assert_eq!(f.cost(), q(3, 2));
        assert_eq!(scale_latencies(&g, &qi(1)).unwrap(), g);
        assert!(matches!(scale_latencies(&g, &qi(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn normalize_single_edge() {
        let g = InstanceBuilder::new("s", "t")
            .edge("e", "s", "t", LatencyFunction::linear(qi(1)).unwrap())
            .rate(qi(4))
            .build()
            .unwrap();
        let n = normalize_rate(&g).unwrap();
        assert_eq!(n.rate(), &qi(1));
        assert_eq!(n.edge(0).latency.linear_slope(), Some(&qi(4)));
        let f = Flow::single_path(&n, vec![0]).unwrap();
        assert_eq!(f.cost(), qi(4));
        let unit = theta(qi(1));
        assert_eq!(normalize_rate(&unit).unwrap(), unit);
    }

    #[test]
    fn structure_errors() {
        let lin = || LatencyFunction::linear(qi(1)).unwrap();
        let no_path = InstanceBuilder::new("s", "t").edge("e", "t", "s", lin()).build();
        assert!(matches!(no_path, Err(Error::Structure(_))));
        let dup = InstanceBuilder::new("s", "t").edge("e", "s", "t", lin()).edge("e", "s", "t", lin()).build();
        assert!(matches!(dup, Err(Error::Structure(_))));
        let loop_ = InstanceBuilder::new("s", "t").edge("e", "s", "t", lin()).edge("l", "s", "s", lin()).build();
        assert!(matches!(loop_, Err(Error::Structure(_))));
        let same = RoutingInstance::new(ids(&["s"]), "s", "s", vec![], qi(1));
        assert!(matches!(same, Err(Error::Structure(_))));
    }

    #[test]
    fn table_domain_must_cover_rate() {
        let tab = LatencyFunction::table(vec![(qi(0), qi(0)), (qi(1), qi(1))]).unwrap();
        let g = InstanceBuilder::new("s", "t").edge("e", "s", "t", tab).rate(qi(2)).build();
        assert!(matches!(g, Err(Error::Domain(_))));
    }

    #[test]
    fn labels_are_minimax() {
        let g = theta(qi(1));
        let f = Flow::from_ids(&g, &[(ids(&["su", "uv", "vt"]), qi(1))]).unwrap();
        let lat = g.latencies(&f.edge_loads());
        let labels = g.min_bottleneck_labels(&lat);
        let v = g.node_index("v").unwrap();
        let t = g.sink();
        assert_eq!(labels[v], Some(qi(0)));
        assert_eq!(labels[t], Some(qi(1)));
    }
}
