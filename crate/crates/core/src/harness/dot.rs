use std::fmt::Write;

use crate::landmarks::{LandmarkGraph, OrderingKind};
use crate::task::Task;

fn style(kind: OrderingKind) -> &'static str {
    match kind {
        OrderingKind::Natural => "bold",
        OrderingKind::GreedyNecessary => "solid",
        OrderingKind::Reasonable => "dashed",
        OrderingKind::ObedientReasonable => "dotted",
    }
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The landmark graph in DOT. Nodes are `n<id>` labelled with their facts;
/// goal landmarks are drawn with a double border.
pub fn export_dot(graph: &LandmarkGraph, task: &Task) -> String {
    let mut out = String::from("digraph landmarks {\n");
    for (id, node) in graph.nodes().iter().enumerate() {
        let label = escape(&node.landmark.label(task));
        let extra = if node.is_goal { ", peripheries=2" } else { "" };
        let _ = writeln!(out, "  n{id} [label=\"{label}\"{extra}];");
    }
    for o in graph.orderings() {
        let _ = writeln!(
            out,
            "  n{} -> n{} [style={}, label=\"{}\"];",
            o.from,
            o.to,
            style(o.kind),
            o.kind.as_str()
        );
    }
    out.push_str("}\n");
    out
}
