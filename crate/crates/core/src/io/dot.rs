use std::fmt::Write;

use crate::equilibrium::is_nash_flow;
use crate::model::{Flow, RoutingInstance};
use crate::rational::to_short;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz digraph of an instance. With a flow, each edge is labelled
/// `f_e / c_e(f_e)`, and when the flow is a Nash flow its blocking cut is
/// drawn in red.
pub fn export_dot(instance: &RoutingInstance, flow: Option<&Flow>) -> String {
    let mut out = String::from("digraph G {\n  rankdir=LR;\n");
    for (i, n) in instance.nodes().iter().enumerate() {
        let shape = if i == instance.source() || i == instance.sink() { "doublecircle" } else { "circle" };
        writeln!(out, "  {} [shape={shape}];", quote(n)).unwrap();
    }
    let (loads, lat, cut) = match flow {
        Some(f) => {
            let loads = f.edge_loads();
            let lat = instance.latencies(&loads);
            let cert = is_nash_flow(f);
            (Some(loads), Some(lat), cert.blocking_cut.unwrap_or_default())
        }
        None => (None, None, Default::default()),
    };
    for (i, e) in instance.edges().iter().enumerate() {
        let label = match (&loads, &lat) {
            (Some(l), Some(c)) => format!("{}: {} / {}", e.id, to_short(&l[i]), to_short(&c[i])),
            _ => format!("{}: {}", e.id, e.latency),
        };
        let style = if cut.contains(&i) { ", color=red, penwidth=2" } else { "" };
        writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            quote(instance.node_name(e.tail)),
            quote(instance.node_name(e.head)),
            quote(&label)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
