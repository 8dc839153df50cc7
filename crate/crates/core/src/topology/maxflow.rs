use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::model::{Path, RoutingInstance};
use crate::rational::{zero, Q};

/// Result of a maximum-flow computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: Q,
    /// Flow on each edge.
    pub edge_flows: Vec<Q>,
    /// Nodes reachable from the source in the final residual graph; their
    /// forward edges form a minimum cut.
    pub source_side: Vec<bool>,
}

/// Exact maximum s-t flow under per-edge capacities (shortest augmenting paths).
pub fn max_flow(instance: &RoutingInstance, capacities: &[Q]) -> MaxFlow {
    assert_eq!(capacities.len(), instance.edge_count(), "one capacity per edge");
    assert!(capacities.iter().all(|c| !c.is_negative()), "capacities must be nonnegative");
    let n = instance.node_count();
    let (s, t) = (instance.source(), instance.sink());
    let mut flow = vec![zero(); instance.edge_count()];
    let mut value = zero();
    loop {
        // (edge, forward?) used to reach each node
        let mut via: Vec<Option<(usize, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in instance.out_edges(u) {
                let h = instance.edge(e).head;
                if !seen[h] && flow[e] < capacities[e] {
                    seen[h] = true;
                    via[h] = Some((e, true));
                    queue.push_back(h);
                }
            }
            for &e in instance.in_edges(u) {
                let tl = instance.edge(e).tail;
                if !seen[tl] && flow[e].is_positive() {
                    seen[tl] = true;
                    via[tl] = Some((e, false));
                    queue.push_back(tl);
                }
            }
        }
        if !seen[t] {
            return MaxFlow { value, edge_flows: flow, source_side: seen };
        }
        let mut steps = Vec::new();
        let mut v = t;
        while let Some((e, fwd)) = via[v] {
            steps.push((e, fwd));
            v = if fwd { instance.edge(e).tail } else { instance.edge(e).head };
        }
        let delta = steps
            .iter()
            .map(|&(e, fwd)| if fwd { &capacities[e] - &flow[e] } else { flow[e].clone() })
            .min()
            .expect("augmenting path is nonempty");
        for (e, fwd) in steps {
            if fwd {
                flow[e] += &delta;
            } else {
                flow[e] -= &delta;
            }
        }
        value += delta;
    }
}

/// Splits an edge flow satisfying conservation into simple s-t path flows.
/// Circulations are cancelled first and dropped from the result.
pub(crate) fn decompose_edge_flow(instance: &RoutingInstance, edge_flows: &[Q]) -> Vec<(Path, Q)> {
    let mut flow = edge_flows.to_vec();
    cancel_cycles(instance, &mut flow);
    let mut paths = Vec::new();
    loop {
        let mut path = Vec::new();
        let mut u = instance.source();
        while u != instance.sink() {
            let Some(&e) = instance.out_edges(u).iter().find(|&&e| flow[e].is_positive()) else {
                break;
            };
            path.push(e);
            u = instance.edge(e).head;
        }
        if path.is_empty() {
            break;
        }
        assert_eq!(u, instance.sink(), "edge flow violates conservation");
        let amount = path.iter().map(|&e| flow[e].clone()).min().unwrap();
        for &e in &path {
            flow[e] -= &amount;
        }
        paths.push((path, amount));
    }
    paths
}

fn cancel_cycles(instance: &RoutingInstance, flow: &mut [Q]) {
    let n = instance.node_count();
    loop {
        // colour-based DFS over positive-flow edges looking for a back edge
        let mut state = vec![0u8; n];
        let mut parent_edge: Vec<Option<usize>> = vec![None; n];
        let mut found = None;
        'outer: for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some(&mut (u, ref mut pos)) = stack.last_mut() {
                let outs = instance.out_edges(u);
                if *pos == outs.len() {
                    state[u] = 2;
                    stack.pop();
                    continue;
                }
                let e = outs[*pos];
                *pos += 1;
                if !flow[e].is_positive() {
                    continue;
                }
                let h = instance.edge(e).head;
                match state[h] {
                    0 => {
                        state[h] = 1;
                        parent_edge[h] = Some(e);
                        stack.push((h, 0));
                    }
                    1 => {
                        found = Some((e, h));
                        break 'outer;
                    }
                    _ => {}
                }
            }
        }
        let Some((closing, start)) = found else { return };
        let mut cycle = vec![closing];
        let mut v = instance.edge(closing).tail;
        while v != start {
            let e = parent_edge[v].expect("cycle walks back to its start");
            cycle.push(e);
            v = instance.edge(e).tail;
        }
        let amount = cycle.iter().map(|&e| flow[e].clone()).min().unwrap();
        for &e in &cycle {
            flow[e] -= &amount;
        }
        debug_assert!(cycle.iter().any(|&e| flow[e].is_zero()));
    }
}
