use std::fmt;

use num_traits::Zero;

use crate::error::Result;
use crate::model::{Flow, RoutingInstance};
use crate::rational::{q, Q};

use super::ddp::{classify_2ddp, DdpVerdict};
use super::gap::GapNetwork;

/// What a witness flow certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessRole {
    /// An optimal flow of the full gadget, cost `r/γ1`.
    Optimal,
    /// A Nash flow of the good subnetwork, cost `r/γ1` (YES instances only).
    GoodEquilibrium,
    /// A Nash flow of the full gadget, cost `r/γ2`.
    BadEquilibrium,
}

impl WitnessRole {
    pub fn name(self) -> &'static str {
        match self {
            WitnessRole::Optimal => "optimal",
            WitnessRole::GoodEquilibrium => "good-equilibrium",
            WitnessRole::BadEquilibrium => "bad-equilibrium",
        }
    }
}

impl fmt::Display for WitnessRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A constructed flow with the subnetwork it lives on and its cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFlow {
    pub role: WitnessRole,
    /// Edge ids of the subnetwork, sorted; the whole gadget for the
    /// optimal and bad flows.
    pub subnetwork: Vec<String>,
    pub flow: Flow,
    pub expected_cost: Q,
}

/// Path templates of one level: unit mass split over edge-id paths.
type Template = Vec<(Vec<String>, Q)>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Optimal,
    Good,
    Bad,
}

struct Paths {
    /// Edge-disjoint `s1 → t2` and `s2 → t1` paths of `D`.
    cross: (Vec<String>, Vec<String>),
    /// Vertex-disjoint `s1 → t1` and `s2 → t2` paths, on YES instances.
    disjoint: Option<(Vec<String>, Vec<String>)>,
}

enum Segment<'a> {
    External(usize),
    D(&'a [String]),
}

fn segment_template(level: u32, kind: Kind, seg: &Segment<'_>, paths: &Paths) -> Template {
    match seg {
        Segment::External(2) => vec![(vec!["e2".to_string()], q(1, 1))],
        Segment::External(i) if level == 0 => vec![(vec![format!("e{i}")], q(1, 1))],
        Segment::External(i) => template(level - 1, kind, paths)
            .into_iter()
            .map(|(p, x)| (p.into_iter().map(|e| format!("G{i}.{e}")).collect(), x))
            .collect(),
        Segment::D(ids) => vec![(ids.iter().map(|e| format!("D.{e}")).collect(), q(1, 1))],
    }
}

/// Joins series segments, pairing their unit-mass path splits by cumulative
/// mass. Loads inside each segment are preserved and the result has at most
/// the sum of the segment path counts.
fn concat(segments: Vec<Template>) -> Template {
    segments
        .into_iter()
        .reduce(|acc, next| {
            let mut out = Vec::new();
            let (mut i, mut j) = (0, 0);
            let (mut left_a, mut left_b) = (acc[0].1.clone(), next[0].1.clone());
            loop {
                let take = if left_a < left_b { left_a.clone() } else { left_b.clone() };
                let mut p = acc[i].0.clone();
                p.extend(next[j].0.iter().cloned());
                out.push((p, take.clone()));
                left_a -= &take;
                left_b -= &take;
                if left_a.is_zero() {
                    i += 1;
                    if i == acc.len() {
                        break;
                    }
                    left_a = acc[i].1.clone();
                }
                if left_b.is_zero() {
                    j += 1;
                    if j == next.len() {
                        break;
                    }
                    left_b = next[j].1.clone();
                }
            }
            out
        })
        .expect("routes have segments")
}

fn template(level: u32, kind: Kind, paths: &Paths) -> Template {
    use Segment::{External as X, D};
    let (p, q_) = &paths.cross;
    let routes: Vec<(Q, Vec<Segment<'_>>)> = match kind {
        Kind::Optimal => vec![
            (q(1, 4), vec![X(4), X(5), D(p), X(9)]),
            (q(1, 4), vec![X(6), D(q_), X(7), X(8)]),
            (q(1, 2), vec![X(1), X(2), X(3)]),
        ],
        Kind::Good => {
            let (pp, qq) = paths.disjoint.as_ref().expect("good flows need a YES instance");
            vec![
                (q(1, 4), vec![X(4), X(5), D(pp), X(7), X(8)]),
                (q(1, 4), vec![X(6), D(qq), X(9)]),
                (q(1, 2), vec![X(1), X(2), X(3)]),
            ]
        }
        Kind::Bad => vec![
            (q(1, 3), vec![X(1), X(2), X(3)]),
            (q(1, 3), vec![X(1), X(2), X(5), D(p), X(9)]),
            (q(1, 3), vec![X(6), D(q_), X(7), X(2), X(3)]),
        ],
    };
    routes
        .into_iter()
        .flat_map(|(mass, segs)| {
            let parts = segs.iter().map(|s| segment_template(level, kind, s, paths)).collect();
            concat(parts).into_iter().map(move |(path, x)| (path, x * &mass))
        })
        .collect()
}

fn good_ids(level: u32, paths: &Paths) -> Vec<String> {
    let (pp, qq) = paths.disjoint.as_ref().expect("YES instance");
    let mut ids: Vec<String> = pp.iter().chain(qq).map(|e| format!("D.{e}")).collect();
    ids.push("e2".into());
    for i in [1, 3, 4, 5, 6, 7, 8, 9] {
        if level == 0 {
            ids.push(format!("e{i}"));
        } else {
            ids.extend(good_ids(level - 1, paths).into_iter().map(|e| format!("G{i}.{e}")));
        }
    }
    ids
}

/// Edge ids of the good subnetwork: the vertex-disjoint `s1 → t1` and
/// `s2 → t2` paths of every copy of `D`, `e2`, and recursively the good
/// subnetwork of every edgework. `None` for NO instances.
pub fn good_subnetwork_ids(gap: &GapNetwork) -> Result<Option<Vec<String>>> {
    let Some(paths) = witness_paths(gap)? else { return Ok(None) };
    if paths.disjoint.is_none() {
        return Ok(None);
    }
    let mut ids = good_ids(gap.level, &paths);
    ids.sort();
    Ok(Some(ids))
}

fn witness_paths(gap: &GapNetwork) -> Result<Option<Paths>> {
    let Some(cross) = gap.ddp.cross_paths() else { return Ok(None) };
    let disjoint = match classify_2ddp(&gap.ddp)? {
        DdpVerdict::Yes { p, q } => Some((p, q)),
        DdpVerdict::No => None,
    };
    Ok(Some(Paths { cross, disjoint }))
}

/// The explicit flows from the gadget's correctness argument at rate `r`:
/// the optimal routing on the full gadget, the equilibrium on the good
/// subnetwork (YES instances), and the equilibrium with one third of the
/// rate on each of three routes on the full gadget. Inside an edgework the
/// flow follows the same kind of flow one level down.
pub fn build_witness_flows(gap: &GapNetwork, r: &Q) -> Result<Vec<WitnessFlow>> {
    let full = gap.at_rate(r.clone())?;
    let mut all_ids: Vec<String> = full.edges().iter().map(|e| e.id.clone()).collect();
    all_ids.sort();
    let paths = witness_paths(gap)?.expect("gadgets are built only when D has cross paths");
    let scaled = |t: Template| -> Vec<(Vec<String>, Q)> { t.into_iter().map(|(p, x)| (p, x * r)).collect() };
    let flow_on = |inst: &RoutingInstance, t: Template| -> Result<Flow> {
        if r.is_zero() {
            Flow::new(inst, vec![])
        } else {
            Flow::from_ids(inst, &scaled(t))
        }
    };

    let mut out = vec![WitnessFlow {
        role: WitnessRole::Optimal,
        subnetwork: all_ids.clone(),
        flow: flow_on(&full, template(gap.level, Kind::Optimal, &paths))?,
        expected_cost: r / &gap.gamma1,
    }];
    if paths.disjoint.is_some() {
        let mut ids = good_ids(gap.level, &paths);
        ids.sort();
        let sub = full.subnetwork_by_ids(&ids)?;
        out.push(WitnessFlow {
            role: WitnessRole::GoodEquilibrium,
            subnetwork: ids,
            flow: flow_on(&sub, template(gap.level, Kind::Good, &paths))?,
            expected_cost: r / &gap.gamma1,
        });
    }
    out.push(WitnessFlow {
        role: WitnessRole::BadEquilibrium,
        subnetwork: all_ids,
        flow: flow_on(&full, template(gap.level, Kind::Bad, &paths))?,
        expected_cost: r / &gap.gamma2,
    });
    Ok(out)
}
