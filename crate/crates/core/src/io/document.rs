use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::constructions::{rebuild_gap, DCopy, GapNetwork, TwoDDPInstance};
use crate::latency::{LatencyFunction, Shape};
use crate::model::RoutingInstance;
use crate::rational::{parse_q, to_pq, Q};

use super::ParseError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawDocument {
    schema_version: u32,
    nodes: Vec<String>,
    source: String,
    sink: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rate: Option<String>,
    edges: Vec<RawEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<RawMetadata>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawEdge {
    id: String,
    tail: String,
    head: String,
    latency: RawLatency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawLatency {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawMetadata {
    gamma1: String,
    gamma2: String,
    level: u32,
    eps: Vec<String>,
    ddp: RawDdp,
    d_copies: Vec<RawCopy>,
    external_edges: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawDdp {
    nodes: Vec<String>,
    edges: Vec<(String, String, String)>,
    s1: String,
    s2: String,
    t1: String,
    t2: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RawCopy {
    prefix: String,
    node_map: BTreeMap<String, String>,
    edge_map: BTreeMap<String, String>,
}

/// A parsed instance file: the instance and, for generated gadgets, the
/// gadget that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDocument {
    pub instance: RoutingInstance,
    pub gadget: Option<GapNetwork>,
}

impl InstanceDocument {
    pub fn new(instance: RoutingInstance) -> Self {
        Self { instance, gadget: None }
    }

    /// A gadget document at rate `r`.
    pub fn from_gap(gap: &GapNetwork, r: Q) -> crate::Result<Self> {
        Ok(Self { instance: gap.at_rate(r)?, gadget: Some(gap.clone()) })
    }
}

fn rational(field: &str, text: &str) -> Result<Q, ParseError> {
    parse_q(text).ok_or_else(|| ParseError::MalformedRational { field: field.to_string(), value: text.to_string() })
}

fn latency(edge: &str, raw: &RawLatency) -> Result<LatencyFunction, ParseError> {
    let field = |name: &str, v: &Option<String>| -> Result<Q, ParseError> {
        let text = v.as_ref().ok_or_else(|| ParseError::MissingField { edge: edge.into(), field: name.into() })?;
        rational(&format!("edges[{edge}].latency.{name}"), text)
    };
    let invalid = |e: crate::Error| ParseError::InvalidLatency { edge: edge.into(), reason: e.to_string() };
    let base = match raw.kind.as_str() {
        "linear" => LatencyFunction::linear(field("a", &raw.a)?).map_err(invalid)?,
        "affine" => LatencyFunction::affine(field("a", &raw.a)?, field("b", &raw.b)?).map_err(invalid)?,
        "table" => {
            let pts = raw.table.as_ref().ok_or_else(|| ParseError::MissingField { edge: edge.into(), field: "table".into() })?;
            let pts = pts
                .iter()
                .map(|(x, y)| Ok((rational(&format!("edges[{edge}].latency.table"), x)?, rational(&format!("edges[{edge}].latency.table"), y)?)))
                .collect::<Result<Vec<_>, ParseError>>()?;
            LatencyFunction::table(pts).map_err(invalid)?
        }
        other => return Err(ParseError::UnknownLatencyType { edge: edge.into(), kind: other.into() }),
    };
    match &raw.xi {
        Some(_) => base.with_xi(field("xi", &raw.xi)?).map_err(invalid),
        None => Ok(base),
    }
}

fn ddp(raw: &RawDdp) -> Result<TwoDDPInstance, ParseError> {
    let edges: Vec<(&str, &str, &str)> = raw.edges.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
    let nodes: Vec<&str> = raw.nodes.iter().map(String::as_str).collect();
    TwoDDPInstance::new(&nodes, &edges, [&raw.s1, &raw.s2, &raw.t1, &raw.t2])
        .map_err(|e| ParseError::InvalidMetadata(e.to_string()))
}

/// Parses an instance document, enforcing every model invariant.
pub fn parse_document(text: &str) -> Result<InstanceDocument, ParseError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(ParseError::UnsupportedSchema(raw.schema_version));
    }
    let known: HashSet<&str> = raw.nodes.iter().map(String::as_str).collect();
    let dangling = |role: &str, name: &str| -> Result<(), ParseError> {
        if known.contains(name) {
            Ok(())
        } else {
            Err(ParseError::DanglingReference { role: role.into(), node: name.into() })
        }
    };
    dangling("source", &raw.source)?;
    dangling("sink", &raw.sink)?;
    for e in &raw.edges {
        dangling(&format!("tail of `{}`", e.id), &e.tail)?;
        dangling(&format!("head of `{}`", e.id), &e.head)?;
    }
    let rate = match &raw.rate {
        Some(r) => rational("rate", r)?,
        None => crate::rational::one(),
    };
    let edges = raw
        .edges
        .iter()
        .map(|e| Ok((e.id.clone(), e.tail.clone(), e.head.clone(), latency(&e.id, &e.latency)?)))
        .collect::<Result<Vec<_>, ParseError>>()?;

    // reachability first so a missing path gets its own error
    let mut seen = HashSet::from([raw.source.as_str()]);
    let mut queue = VecDeque::from([raw.source.as_str()]);
    while let Some(x) = queue.pop_front() {
        for e in raw.edges.iter().filter(|e| e.tail == x) {
            if seen.insert(e.head.as_str()) {
                queue.push_back(e.head.as_str());
            }
        }
    }
    if !seen.contains(raw.sink.as_str()) && raw.source != raw.sink {
        return Err(ParseError::MissingStPath);
    }
    let instance = RoutingInstance::new(raw.nodes.clone(), &raw.source, &raw.sink, edges, rate)
        .map_err(|e| ParseError::InvalidInstance(e.to_string()))?;

    let gadget = match &raw.metadata {
        None => None,
        Some(m) => {
            let d = ddp(&m.ddp)?;
            let eps = m.eps.iter().map(|e| rational("metadata.eps", e)).collect::<Result<Vec<_>, _>>()?;
            let gap = rebuild_gap(&d, &eps).map_err(|e| ParseError::InvalidMetadata(e.to_string()))?;
            let rebuilt = gap.at_rate(instance.rate().clone()).map_err(|e| ParseError::InvalidMetadata(e.to_string()))?;
            let declared = (
                rational("metadata.gamma1", &m.gamma1)?,
                rational("metadata.gamma2", &m.gamma2)?,
                m.level,
            );
            if rebuilt != instance || declared != (gap.gamma1.clone(), gap.gamma2.clone(), gap.level) {
                return Err(ParseError::InvalidMetadata("metadata does not describe this network".into()));
            }
            if metadata(&gap) != *m {
                return Err(ParseError::InvalidMetadata("copy or external-edge index disagrees with the gadget".into()));
            }
            Some(gap)
        }
    };
    Ok(InstanceDocument { instance, gadget })
}

/// Parses a document and returns its instance.
pub fn parse_instance(text: &str) -> Result<RoutingInstance, ParseError> {
    parse_document(text).map(|d| d.instance)
}

fn raw_latency(l: &LatencyFunction) -> RawLatency {
    let mut raw = RawLatency { kind: String::new(), a: None, b: None, xi: Some(to_pq(l.xi())), table: None };
    match l.shape() {
        Shape::Linear { a } => {
            raw.kind = "linear".into();
            raw.a = Some(to_pq(a));
        }
        Shape::Affine { a, b } => {
            raw.kind = "affine".into();
            raw.a = Some(to_pq(a));
            raw.b = Some(to_pq(b));
        }
        Shape::Table { points } => {
            raw.kind = "table".into();
            raw.table = Some(points.iter().map(|(x, y)| (to_pq(x), to_pq(y))).collect());
        }
    }
    raw
}

fn metadata(gap: &GapNetwork) -> RawMetadata {
    let [s1, s2, t1, t2] = gap.ddp.terminals().map(String::from);
    RawMetadata {
        gamma1: to_pq(&gap.gamma1),
        gamma2: to_pq(&gap.gamma2),
        level: gap.level,
        eps: gap.eps.iter().map(to_pq).collect(),
        ddp: RawDdp {
            nodes: gap.ddp.nodes().to_vec(),
            edges: gap.ddp.edges().map(|(a, b, c)| (a.into(), b.into(), c.into())).collect(),
            s1,
            s2,
            t1,
            t2,
        },
        d_copies: gap
            .d_copies
            .iter()
            .map(|c: &DCopy| RawCopy { prefix: c.prefix.clone(), node_map: c.node_map.clone(), edge_map: c.edge_map.clone() })
            .collect(),
        external_edges: gap.external_edges.clone(),
    }
}

/// Canonical JSON for a document. Rationals are written as `"p/q"`.
pub fn emit_document(doc: &InstanceDocument) -> String {
    let g = &doc.instance;
    let raw = RawDocument {
        schema_version: SCHEMA_VERSION,
        nodes: g.nodes().to_vec(),
        source: g.node_name(g.source()).into(),
        sink: g.node_name(g.sink()).into(),
        rate: Some(to_pq(g.rate())),
        edges: g
            .edges()
            .iter()
            .map(|e| RawEdge {
                id: e.id.clone(),
                tail: g.node_name(e.tail).into(),
                head: g.node_name(e.head).into(),
                latency: raw_latency(&e.latency),
            })
            .collect(),
        metadata: doc.gadget.as_ref().map(metadata),
    };
    let mut text = serde_json::to_string_pretty(&raw).expect("documents serialize");
    text.push('\n');
    text
}

/// Canonical JSON for a plain instance.
pub fn emit_instance(instance: &RoutingInstance) -> String {
    emit_document(&InstanceDocument::new(instance.clone()))
}
