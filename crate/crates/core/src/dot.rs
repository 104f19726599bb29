//! Graphviz export.

use std::fmt::Write;

use crate::graph::Network;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic DOT digraph; edge `j -> i` is labelled with `γ_ij`.
pub fn export_dot(net: &Network, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    let _ = writeln!(out, "  rankdir=LR;");
    for l in net.labels() {
        let _ = writeln!(out, "  {};", quote(l));
    }
    let mut edges: Vec<(usize, usize)> = net.gains().map(|(k, _)| k).collect();
    edges.sort_by_key(|&(to, from)| (from, to));
    for (to, from) in edges {
        let g = net.gain(to, from).expect("listed edge");
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(net.label(from)),
            quote(net.label(to)),
            quote(&g.to_string())
        );
    }
    out.push_str("}\n");
    out
}
