//! Small named instances used throughout the docs and tests.

use crate::latency::LatencyFunction;
use crate::model::{InstanceBuilder, RoutingInstance};
use crate::rational::{qi, Q};

fn lin(a: Q) -> LatencyFunction {
    LatencyFunction::linear(a).expect("positive slope")
}

/// The θ-graph: nodes `s, u, v, t`, edges `su, ut, sv, vt, uv`, identity
/// latencies. Removing `uv` halves its worst equilibrium cost.
pub fn theta(rate: Q) -> RoutingInstance {
    InstanceBuilder::new("s", "t")
        .node("u")
        .node("v")
        .edge("su", "s", "u", lin(qi(1)))
        .edge("ut", "u", "t", lin(qi(1)))
        .edge("sv", "s", "v", lin(qi(1)))
        .edge("vt", "v", "t", lin(qi(1)))
        .edge("uv", "u", "v", lin(qi(1)))
        .rate(rate)
        .build()
        .expect("valid fixture")
}

/// Parallel `s → t` edges with the given slopes, named `e0, e1, …`.
pub fn parallel_links(slopes: &[Q], rate: Q) -> RoutingInstance {
    slopes
        .iter()
        .enumerate()
        .fold(InstanceBuilder::new("s", "t"), |b, (i, a)| b.edge(&format!("e{i}"), "s", "t", lin(a.clone())))
        .rate(rate)
        .build()
        .expect("valid fixture")
}

/// A path `s → x1 → … → t` with the given slopes, edges named `e0, e1, …`.
pub fn path_network(slopes: &[Q], rate: Q) -> RoutingInstance {
    let n = slopes.len();
    let name = |i: usize| match i {
        0 => "s".to_string(),
        i if i == n => "t".to_string(),
        i => format!("x{i}"),
    };
    slopes
        .iter()
        .enumerate()
        .fold(InstanceBuilder::new("s", "t"), |b, (i, a)| {
            b.edge(&format!("e{i}"), &name(i), &name(i + 1), lin(a.clone()))
        })
        .rate(rate)
        .build()
        .expect("valid fixture")
}
