//! Graphviz output.

use std::fmt::Write as _;

use spin_atlas_core::graph::MultiplicityUnsupported;
use spin_atlas_core::{build_connection_graph, edge_multiplicities_r_le_2, GraphClass};

/// The connection graph with every edge dashed.
pub fn connection_dot(gc: &GraphClass) -> String {
    let cg = build_connection_graph(gc);
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{gc}\" {{");
    out.push_str("  node [shape=circle];\n");
    for v in cg.vertices() {
        let _ = writeln!(out, "  \"{v}\";");
    }
    for (a, b) in cg.edges() {
        let _ = writeln!(out, "  \"{a}\" -- \"{b}\" [style=dashed];");
    }
    out.push_str("}\n");
    out
}

/// The full graph at order `r <= 2` with edge multiplicities as labels;
/// arc edges are directed.
pub fn full_dot(gc: &GraphClass) -> Result<String, MultiplicityUnsupported> {
    let m = edge_multiplicities_r_le_2(gc)?;
    let cg = build_connection_graph(gc);
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{gc}\" {{");
    out.push_str("  node [shape=circle];\n");
    for v in cg.vertices() {
        let _ = writeln!(out, "  \"{v}\";");
    }
    for (a, b, k) in &m.straight {
        let _ = writeln!(out, "  \"{a}\" -> \"{b}\" [dir=none, label=\"{k}\"];");
    }
    for (a, b, k) in &m.arcs {
        let _ = writeln!(out, "  \"{a}\" -> \"{b}\" [style=curved, label=\"{k}\"];");
    }
    out.push_str("}\n");
    Ok(out)
}
