use std::collections::HashMap;

use crate::model::RoutingInstance;

/// Node of a series-parallel decomposition tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpNode {
    /// A single edge (by index).
    Leaf(usize),
    /// The left part's sink is identified with the right part's source.
    Series(Box<SpNode>, Box<SpNode>),
    /// Both parts share source and sink.
    Parallel(Box<SpNode>, Box<SpNode>),
}

impl SpNode {
    /// Source and sink of the sub-network this node describes, or `None` when
    /// the composition rules are violated.
    pub fn terminals(&self, instance: &RoutingInstance) -> Option<(usize, usize)> {
        match self {
            SpNode::Leaf(e) => {
                let e = instance.edge(*e);
                Some((e.tail, e.head))
            }
            SpNode::Series(a, b) => {
                let (s1, t1) = a.terminals(instance)?;
                let (s2, t2) = b.terminals(instance)?;
                (t1 == s2).then_some((s1, t2))
            }
            SpNode::Parallel(a, b) => {
                let ta = a.terminals(instance)?;
                (ta == b.terminals(instance)?).then_some(ta)
            }
        }
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            SpNode::Leaf(e) => out.push(*e),
            SpNode::Series(a, b) | SpNode::Parallel(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }
}

/// A decomposition of an s-t network into series and parallel compositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpTree {
    pub root: SpNode,
}

impl SpTree {
    /// Whether the tree rebuilds exactly the instance: every edge appears once
    /// as a leaf and the root's terminals are the instance's source and sink.
    pub fn reproduces(&self, instance: &RoutingInstance) -> bool {
        let mut leaves = self.root.leaves();
        leaves.sort_unstable();
        leaves == (0..instance.edge_count()).collect::<Vec<_>>()
            && self.root.terminals(instance) == Some((instance.source(), instance.sink()))
    }
}

/// Recognizes two-terminal series-parallel networks by repeatedly merging
/// parallel edges and contracting internal nodes of in- and out-degree one.
/// Isolated nodes are ignored. Returns `None` when the network is not
/// series-parallel.
pub fn series_parallel_decompose(instance: &RoutingInstance) -> Option<SpTree> {
    let (s, t) = (instance.source(), instance.sink());
    let mut live: Vec<Option<(usize, usize, SpNode)>> = instance
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| Some((e.tail, e.head, SpNode::Leaf(i))))
        .collect();
    loop {
        let mut changed = false;

        let mut by_ends: HashMap<(usize, usize), usize> = HashMap::new();
        for i in 0..live.len() {
            let Some((u, v, _)) = live[i] else { continue };
            match by_ends.get(&(u, v)) {
                Some(&j) => {
                    let (_, _, a) = live[j].take().unwrap();
                    let (_, _, b) = live[i].take().unwrap();
                    live[i] = Some((u, v, SpNode::Parallel(Box::new(a), Box::new(b))));
                    by_ends.insert((u, v), i);
                    changed = true;
                }
                None => {
                    by_ends.insert((u, v), i);
                }
            }
        }

        let mut ins: Vec<Vec<usize>> = vec![Vec::new(); instance.node_count()];
        let mut outs: Vec<Vec<usize>> = vec![Vec::new(); instance.node_count()];
        for (i, e) in live.iter().enumerate() {
            if let Some((u, v, _)) = e {
                outs[*u].push(i);
                ins[*v].push(i);
            }
        }
        for v in 0..instance.node_count() {
            if v == s || v == t || ins[v].len() != 1 || outs[v].len() != 1 {
                continue;
            }
            let (a, b) = (ins[v][0], outs[v][0]);
            if live[a].is_none() || live[b].is_none() || a == b {
                continue;
            }
            let (u, _, left) = live[a].take().unwrap();
            let (_, w, right) = live[b].take().unwrap();
            if u == w {
                // contracting would close a directed cycle
                return None;
            }
            live[a] = Some((u, w, SpNode::Series(Box::new(left), Box::new(right))));
            changed = true;
            // degrees of u and w are unchanged; the next pass recomputes them
            break;
        }
        if !changed {
            break;
        }
    }
    let mut remaining = live.into_iter().flatten();
    match (remaining.next(), remaining.next()) {
        (Some((u, v, root)), None) if u == s && v == t => Some(SpTree { root }),
        _ => None,
    }
}
