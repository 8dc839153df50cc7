use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

/// Default node bound for the brute-force 2DDP classifier.
pub const DEFAULT_DDP_NODE_BOUND: usize = 16;

/// A 2-directed-disjoint-paths instance: a digraph `D` with terminals
/// `s1, s2, t1, t2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoDDPInstance {
    nodes: Vec<String>,
    /// `(id, tail, head)` with node indices.
    edges: Vec<(String, usize, usize)>,
    s1: usize,
    s2: usize,
    t1: usize,
    t2: usize,
}

/// Outcome of [`classify_2ddp`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DdpVerdict {
    /// Vertex-disjoint `s1 → t1` and `s2 → t2` paths, as edge ids.
    Yes { p: Vec<String>, q: Vec<String> },
    No,
}

impl DdpVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, DdpVerdict::Yes { .. })
    }
}

impl TwoDDPInstance {
    /// Builds `D` from node names, `(id, tail, head)` edges and the terminal
    /// names `[s1, s2, t1, t2]`.
    pub fn new<S: AsRef<str>>(nodes: &[S], edges: &[(S, S, S)], terminals: [&str; 4]) -> Result<Self> {
        let nodes: Vec<String> = nodes.iter().map(|n| n.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        if index.len() != nodes.len() {
            return Err(Error::Structure("duplicate node in D".into()));
        }
        let lookup = |n: &str| {
            index.get(n).copied().ok_or_else(|| Error::Structure(format!("D references unknown node `{n}`")))
        };
        let mut ids = BTreeSet::new();
        let mut built = Vec::with_capacity(edges.len());
        for (id, tail, head) in edges {
            let (id, tail, head) = (id.as_ref(), lookup(tail.as_ref())?, lookup(head.as_ref())?);
            if tail == head {
                return Err(Error::Structure(format!("self-loop `{id}` in D")));
            }
            if !ids.insert(id.to_string()) {
                return Err(Error::Structure(format!("duplicate edge id `{id}` in D")));
            }
            built.push((id.to_string(), tail, head));
        }
        let [s1, s2, t1, t2] = terminals.map(lookup);
        let (s1, s2, t1, t2) = (s1?, s2?, t1?, t2?);
        if BTreeSet::from([s1, s2, t1, t2]).len() != 4 {
            return Err(Error::Structure("terminals s1, s2, t1, t2 must be distinct".into()));
        }
        Ok(Self { nodes, edges: built, s1, s2, t1, t2 })
    }

    /// Nodes named by the edges, with the terminals `s1, s2, t1, t2`.
    pub fn from_edges(edges: &[(&str, &str, &str)]) -> Result<Self> {
        let mut nodes: Vec<&str> = vec!["s1", "s2", "t1", "t2"];
        for (_, a, b) in edges {
            for n in [a, b] {
                if !nodes.contains(n) {
                    nodes.push(n);
                }
            }
        }
        Self::new(&nodes, edges, ["s1", "s2", "t1", "t2"])
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `(id, tail name, head name)` for every edge.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &str)> + '_ {
        self.edges.iter().map(|(id, a, b)| (id.as_str(), self.nodes[*a].as_str(), self.nodes[*b].as_str()))
    }

    /// Terminal names `[s1, s2, t1, t2]`.
    pub fn terminals(&self) -> [&str; 4] {
        [self.s1, self.s2, self.t1, self.t2].map(|i| self.nodes[i].as_str())
    }

    fn edge_ids(&self, path: &[usize]) -> Vec<String> {
        path.iter().map(|&e| self.edges[e].0.clone()).collect()
    }

    fn reaches(&self, from: usize, to: usize, usable: impl Fn(usize) -> bool, blocked: &[bool]) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(x) = queue.pop_front() {
            if x == to {
                return true;
            }
            for (e, (_, a, b)) in self.edges.iter().enumerate() {
                if *a == x && usable(e) && !seen[*b] && !blocked[*b] {
                    seen[*b] = true;
                    queue.push_back(*b);
                }
            }
        }
        false
    }

    /// Simple paths `from → to` over usable edges avoiding `blocked` nodes,
    /// in DFS order by edge index.
    fn simple_paths(&self, from: usize, to: usize, usable: &dyn Fn(usize) -> bool, blocked: &[bool]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut on_path = blocked.to_vec();
        let mut path = Vec::new();
        self.dfs(from, to, usable, &mut on_path, &mut path, &mut out);
        out
    }

    fn dfs(
        &self,
        x: usize,
        to: usize,
        usable: &dyn Fn(usize) -> bool,
        on_path: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if x == to {
            out.push(path.clone());
            return;
        }
        on_path[x] = true;
        for (e, (_, a, b)) in self.edges.iter().enumerate() {
            if *a == x && usable(e) && !on_path[*b] {
                path.push(e);
                self.dfs(*b, to, usable, on_path, path, out);
                path.pop();
            }
        }
        on_path[x] = false;
    }

    /// Edge-disjoint `s1 → t2` and `s2 → t1` paths, as edge ids.
    pub fn cross_paths(&self) -> Option<(Vec<String>, Vec<String>)> {
        let none = vec![false; self.nodes.len()];
        for p in self.simple_paths(self.s1, self.t2, &|_| true, &none) {
            let used: BTreeSet<usize> = p.iter().copied().collect();
            if let Some(q) = self.simple_paths(self.s2, self.t1, &|e| !used.contains(&e), &none).into_iter().next() {
                return Some((self.edge_ids(&p), self.edge_ids(&q)));
            }
        }
        None
    }

    fn mask_of(&self, edge_ids: &[&str]) -> Vec<bool> {
        self.edges.iter().map(|(id, _, _)| edge_ids.contains(&id.as_str())).collect()
    }
}

/// Decides 2DDP by brute force: every simple `s1 → t1` path is tried against
/// the graph left after deleting its vertices.
pub fn classify_2ddp(d: &TwoDDPInstance) -> Result<DdpVerdict> {
    classify_2ddp_with_bound(d, DEFAULT_DDP_NODE_BOUND)
}

pub fn classify_2ddp_with_bound(d: &TwoDDPInstance, max_nodes: usize) -> Result<DdpVerdict> {
    if d.node_count() > max_nodes {
        return Err(Error::capacity("2DDP node count", d.node_count() as u128, max_nodes as u128));
    }
    let mut blocked = vec![false; d.node_count()];
    blocked[d.s2] = true;
    blocked[d.t2] = true;
    for p in d.simple_paths(d.s1, d.t1, &|_| true, &blocked) {
        let mut used = vec![false; d.node_count()];
        used[d.s1] = true;
        for &e in &p {
            used[d.edges[e].2] = true;
        }
        if let Some(q) = d.simple_paths(d.s2, d.t2, &|_| true, &used).into_iter().next() {
            return Ok(DdpVerdict::Yes { p: d.edge_ids(&p), q: d.edge_ids(&q) });
        }
    }
    Ok(DdpVerdict::No)
}

/// Whether the subgraph of `D` on `edge_ids` is good: each of `s1, s2`
/// reaches `t1` or `t2`, each of `t1, t2` is reached from `s1` or `s2`, and
/// it lacks every `s1 → t2` path or every `s2 → t1` path.
pub fn is_good_subnetwork(d: &TwoDDPInstance, edge_ids: &[&str]) -> bool {
    let keep = d.mask_of(edge_ids);
    let none = vec![false; d.node_count()];
    let r = |a: usize, b: usize| d.reaches(a, b, |e| keep[e], &none);
    let out_ok = (r(d.s1, d.t1) || r(d.s1, d.t2)) && (r(d.s2, d.t1) || r(d.s2, d.t2));
    let in_ok = (r(d.s1, d.t1) || r(d.s2, d.t1)) && (r(d.s1, d.t2) || r(d.s2, d.t2));
    out_ok && in_ok && (!r(d.s1, d.t2) || !r(d.s2, d.t1))
}

/// Whether some subset of `edge_ids` forms a good subnetwork of `D`.
///
/// A good subgraph lacking all `s1 → t2` paths must join `s1` to `t1` and
/// `s2` to `t2`, and the union of one such pair of paths is itself good; the
/// other case is symmetric. So it suffices to scan pairs of paths.
pub fn contains_good_subnetwork(d: &TwoDDPInstance, edge_ids: &[&str]) -> bool {
    let keep = d.mask_of(edge_ids);
    let none = vec![false; d.node_count()];
    let usable = |e: usize| keep[e];
    let ps = d.simple_paths(d.s1, d.t1, &usable, &none);
    let qs = d.simple_paths(d.s2, d.t2, &usable, &none);
    ps.iter().any(|p| {
        qs.iter().any(|q| {
            let mut union = vec![false; d.edge_count()];
            for &e in p.iter().chain(q) {
                union[e] = true;
            }
            !d.reaches(d.s1, d.t2, |e| union[e], &none) || !d.reaches(d.s2, d.t1, |e| union[e], &none)
        })
    })
}
