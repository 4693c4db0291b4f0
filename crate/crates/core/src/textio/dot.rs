//! Graphviz export. With grouping on, the states of each top-level
//! namespace sit in their own cluster, so composed devices show up as boxes
//! with only their interface states connected across the boundary.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::automaton::{Automaton, StateId, Symbol};

fn quote(text: &str) -> String {
    format!("\"{}\"", text.replace('\\', "\\\\").replace('"', "\\\""))
}

fn node_line(a: &Automaton, q: &StateId) -> String {
    let shape = if a.is_final(q) { "doublecircle" } else { "circle" };
    format!("{} [shape={shape}];", quote(&q.to_string()))
}

pub fn render_dot(a: &Automaton, group_by_namespace: bool) -> String {
    render_dot_labeled(a, group_by_namespace, &BTreeMap::new())
}

/// Like [`render_dot`], with cluster captions taken from `labels` (keyed by
/// top-level segment) where present.
pub fn render_dot_labeled(
    a: &Automaton,
    group_by_namespace: bool,
    labels: &BTreeMap<String, String>,
) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(a.name())).unwrap();
    out.push_str("  rankdir=LR;\n");
    out.push_str("  __start [shape=point, label=\"\"];\n");

    let mut clusters: BTreeMap<&str, Vec<&StateId>> = BTreeMap::new();
    for q in a.states() {
        match q.namespace().first() {
            Some(top) if group_by_namespace => clusters.entry(top.as_str()).or_default().push(q),
            _ => writeln!(out, "  {}", node_line(a, q)).unwrap(),
        }
    }
    for (top, members) in &clusters {
        writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{top}"))).unwrap();
        let caption = labels.get(*top).map(String::as_str).unwrap_or(top);
        writeln!(out, "    label={};", quote(caption)).unwrap();
        out.push_str("    style=rounded;\n");
        for q in members {
            writeln!(out, "    {}", node_line(a, q)).unwrap();
        }
        out.push_str("  }\n");
    }

    writeln!(out, "  __start -> {};", quote(&a.initial().to_string())).unwrap();
    for (from, x, to) in a.edges() {
        let label = match x {
            Symbol::Epsilon => "ε".to_string(),
            Symbol::Letter(l) => l.to_string(),
        };
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&from.to_string()),
            quote(&to.to_string()),
            quote(&label)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
