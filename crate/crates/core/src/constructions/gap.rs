use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;

use crate::equilibrium::{require_linear, worst_nash_flow};
use crate::error::{Error, Result};
use crate::latency::LatencyFunction;
use crate::model::RoutingInstance;
use crate::rational::{one, q, qi, to_short, zero, Q};

use super::ddp::{contains_good_subnetwork, TwoDDPInstance};

/// Endpoints of the external edges `e1..e9`; `D.*` names are terminals of
/// the embedded copy of `D`.
pub(crate) const EXTERNAL: [(usize, &str, &str); 9] = [
    (1, "s", "u"),
    (2, "u", "v"),
    (3, "v", "t"),
    (4, "s", "v"),
    (5, "v", "@s1"),
    (6, "s", "@s2"),
    (7, "@t1", "u"),
    (8, "u", "t"),
    (9, "@t2", "t"),
];

/// An embedded copy of `D`: the prefix of its ids and the maps from `D`'s
/// node names and edge ids to names in the gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DCopy {
    pub prefix: String,
    pub node_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
}

/// A gap gadget: the base network built from a 2DDP instance, or a
/// recursive amplification of it.
///
/// The instance is stored at rate 1; [`GapNetwork::at_rate`] rescales it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapNetwork {
    pub instance: RoutingInstance,
    pub gamma1: Q,
    pub gamma2: Q,
    pub level: u32,
    /// `ε` used at each level, innermost first.
    pub eps: Vec<Q>,
    /// `e1..e9` mapped to an edge id, or to an edgework id prefix such as
    /// `G4.` above level 0.
    pub external_edges: BTreeMap<String, String>,
    /// Every embedded copy of `D`, the outermost first.
    pub d_copies: Vec<DCopy>,
    pub ddp: TwoDDPInstance,
}

fn lin(a: Q) -> LatencyFunction {
    LatencyFunction::linear(a).expect("positive slope")
}

fn resolve(d: &TwoDDPInstance, node: &str) -> String {
    let [s1, s2, t1, t2] = d.terminals();
    match node {
        "@s1" => format!("D.{s1}"),
        "@s2" => format!("D.{s2}"),
        "@t1" => format!("D.{t1}"),
        "@t2" => format!("D.{t2}"),
        other => other.to_string(),
    }
}

struct Parts {
    nodes: Vec<String>,
    edges: Vec<(String, String, String, LatencyFunction)>,
    top: DCopy,
}

/// `s, t, u, v`, a copy of `D` with latencies `εx`, and edge `e2`.
fn skeleton(d: &TwoDDPInstance, eps: &Q) -> Parts {
    let mut nodes: Vec<String> = ["s", "t", "u", "v"].iter().map(|s| s.to_string()).collect();
    let mut node_map = BTreeMap::new();
    for n in d.nodes() {
        nodes.push(format!("D.{n}"));
        node_map.insert(n.clone(), format!("D.{n}"));
    }
    let mut edges = Vec::new();
    let mut edge_map = BTreeMap::new();
    for (id, a, b) in d.edges() {
        edges.push((format!("D.{id}"), format!("D.{a}"), format!("D.{b}"), lin(eps.clone())));
        edge_map.insert(id.to_string(), format!("D.{id}"));
    }
    edges.push(("e2".into(), "u".into(), "v".into(), lin(eps.clone())));
    Parts { nodes, edges, top: DCopy { prefix: "D.".into(), node_map, edge_map } }
}

fn check_cross_paths(d: &TwoDDPInstance) -> Result<()> {
    if d.cross_paths().is_none() {
        return Err(Error::Structure("D must contain edge-disjoint s1 → t2 and s2 → t1 paths".into()));
    }
    Ok(())
}

/// The base gadget: `D` plus nodes `s, t, u, v` and external edges
/// `e1..e9`. `e1, e3` cost `x/2`, `e4..e9` cost `x`, and `e2` and every edge
/// of `D` cost `εx`. Its optimum is `r/4`; a worst equilibrium at `r/4` on
/// some subnetwork exists exactly when `D` is a YES instance, and otherwise
/// every subnetwork has one at `r/3` or more.
pub fn build_gap_network(d: &TwoDDPInstance, eps: &Q) -> Result<GapNetwork> {
    if !(eps > &zero() && eps < &q(1, 4)) {
        return Err(Error::Domain(format!("eps must lie in (0, 1/4), got {}", to_short(eps))));
    }
    check_cross_paths(d)?;
    let Parts { nodes, mut edges, top } = skeleton(d, eps);
    let mut external = BTreeMap::new();
    for (i, a, b) in EXTERNAL {
        let id = format!("e{i}");
        external.insert(id.clone(), id.clone());
        if i == 2 {
            continue;
        }
        let slope = if i == 1 || i == 3 { q(1, 2) } else { qi(1) };
        edges.push((id, resolve(d, a), resolve(d, b), lin(slope)));
    }
    let instance = RoutingInstance::new(nodes, "s", "t", edges, one())?;
    Ok(GapNetwork {
        instance,
        gamma1: qi(4),
        gamma2: qi(3),
        level: 0,
        eps: vec![eps.clone()],
        external_edges: external,
        d_copies: vec![top],
        ddp: d.clone(),
    })
}

/// One amplification step: every external edge but `e2` becomes an
/// edgework `G_i`, a copy of `gap` whose source and sink are merged with the
/// edge's endpoints. `G1` and `G3` have their latencies halved. `e2` and a
/// fresh copy of `D` cost `εx` with `ε ∈ (0, 1/(4γ1))`. Both gaps scale by
/// the factors 4 and 3.
pub fn amplify_gap(d: &TwoDDPInstance, gap: &GapNetwork, eps: &Q) -> Result<GapNetwork> {
    let limit = one() / (qi(4) * &gap.gamma1);
    if !(eps > &zero() && eps < &limit) {
        return Err(Error::Domain(format!(
            "eps must lie in (0, {}), got {}",
            to_short(&limit),
            to_short(eps)
        )));
    }
    if d != &gap.ddp {
        return Err(Error::Structure("the gap network was built from a different D".into()));
    }
    check_cross_paths(d)?;
    let Parts { mut nodes, mut edges, top } = skeleton(d, eps);
    let inner = &gap.instance;
    let (is, it) = (inner.source(), inner.sink());
    let mut external = BTreeMap::new();
    external.insert("e2".to_string(), "e2".to_string());
    let mut copies = vec![top];
    for (i, a, b) in EXTERNAL {
        if i == 2 {
            continue;
        }
        let prefix = format!("G{i}.");
        external.insert(format!("e{i}"), prefix.clone());
        let (tail, head) = (resolve(d, a), resolve(d, b));
        let rename = |n: usize| -> String {
            if n == is {
                tail.clone()
            } else if n == it {
                head.clone()
            } else {
                format!("{prefix}{}", inner.node_name(n))
            }
        };
        for n in 0..inner.node_count() {
            if n != is && n != it {
                nodes.push(rename(n));
            }
        }
        for e in inner.edges() {
            let lat = if i == 1 || i == 3 { e.latency.scaled(&q(1, 2)) } else { e.latency.clone() };
            edges.push((format!("{prefix}{}", e.id), rename(e.tail), rename(e.head), lat));
        }
        for c in &gap.d_copies {
            let remap_node = |n: &String| rename(inner.node_index(n).expect("copy nodes exist"));
            copies.push(DCopy {
                prefix: format!("{prefix}{}", c.prefix),
                node_map: c.node_map.iter().map(|(k, v)| (k.clone(), remap_node(v))).collect(),
                edge_map: c.edge_map.iter().map(|(k, v)| (k.clone(), format!("{prefix}{v}"))).collect(),
            });
        }
    }
    let instance = RoutingInstance::new(nodes, "s", "t", edges, one())?;
    let mut eps_list = gap.eps.clone();
    eps_list.push(eps.clone());
    Ok(GapNetwork {
        instance,
        gamma1: qi(4) * &gap.gamma1,
        gamma2: qi(3) * &gap.gamma2,
        level: gap.level + 1,
        eps: eps_list,
        external_edges: external,
        d_copies: copies,
        ddp: d.clone(),
    })
}

/// Default `ε` at a level with first gap `γ1`: `1/(8γ1)`, the middle of the
/// admissible interval.
pub fn default_eps(gamma1: &Q) -> Q {
    one() / (qi(8) * gamma1)
}

/// The base gadget followed by `levels` amplifications, with the default
/// `ε` at every level.
pub fn build_gap_tower(d: &TwoDDPInstance, levels: u32) -> Result<GapNetwork> {
    let mut gap = build_gap_network(d, &q(1, 8))?;
    for _ in 0..levels {
        let eps = default_eps(&gap.gamma1);
        gap = amplify_gap(d, &gap, &eps)?;
    }
    Ok(gap)
}

/// Rebuilds a gadget from the `ε` recorded at each level.
pub fn rebuild_gap(d: &TwoDDPInstance, eps: &[Q]) -> Result<GapNetwork> {
    let (first, rest) = eps.split_first().ok_or_else(|| Error::Domain("at least one eps is required".into()))?;
    let mut gap = build_gap_network(d, first)?;
    for e in rest {
        gap = amplify_gap(d, &gap, e)?;
    }
    Ok(gap)
}

impl GapNetwork {
    /// The gadget routing `r` units.
    pub fn at_rate(&self, r: Q) -> Result<RoutingInstance> {
        self.instance.with_rate(r)
    }

    /// Whether the edge set contains a good subnetwork in some embedded copy
    /// of `D`.
    pub fn contains_good_copy<S: AsRef<str>>(&self, edge_ids: &[S]) -> bool {
        let present: HashSet<&str> = edge_ids.iter().map(|s| s.as_ref()).collect();
        self.d_copies.iter().any(|c| {
            let kept: Vec<&str> =
                c.edge_map.iter().filter(|(_, v)| present.contains(v.as_str())).map(|(k, _)| k.as_str()).collect();
            contains_good_subnetwork(&self.ddp, &kept)
        })
    }
}

/// The rate at which a subedgework's worst equilibrium cost reaches
/// `target_cost`. By homogeneity this is `target_cost / B(H, 1)`.
pub fn saturation_rate(subedgework: &RoutingInstance, target_cost: &Q) -> Result<Q> {
    require_linear(subedgework, "saturation rates")?;
    if target_cost <= &zero() {
        return Err(Error::Domain(format!("target cost must be positive, got {}", to_short(target_cost))));
    }
    let unit = worst_nash_flow(&subedgework.with_rate(one())?)?.cost;
    if unit.is_zero() {
        return Err(Error::Degenerate("worst equilibrium cost at rate 1 is zero".into()));
    }
    Ok(target_cost / unit)
}
