//! Graphviz rendering of a case coloured by effective status.

use std::fmt::Write;

use crate::case::{CaseGraph, DefeaterKind};
use crate::status::{Status, StatusMap};

fn fill(status: Status) -> &'static str {
    status.colour()
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            _ => out.push(c),
        }
    }
    out
}

fn label(id: &str, text: &str) -> String {
    const WIDTH: usize = 40;
    let mut lines = vec![id.to_string()];
    let mut current = String::new();
    for word in text.split_whitespace() {
        if !current.is_empty() && current.chars().count() + word.chars().count() + 1 > WIDTH {
            lines.push(std::mem::take(&mut current));
        }
        if !current.is_empty() {
            current.push(' ');
        }
        current.push_str(word);
    }
    if !current.is_empty() {
        lines.push(current);
    }
    esc(&lines.join("\n"))
}

/// Renders `graph` as a DOT digraph. Claims are boxes, arguments ellipses
/// labelled with their block, evidence folders, defeaters octagons with
/// dashed edges to their targets. Output is byte-stable.
pub fn emit_dot(graph: &CaseGraph, map: &StatusMap) -> String {
    let status = |id| map.status(id).unwrap_or(Status::Unevaluated);
    let mut out = String::new();
    let _ = writeln!(out, "digraph case {{");
    let _ = writeln!(out, "  label=\"{}\";", esc(&graph.title));
    let _ = writeln!(out, "  rankdir=TB;");
    let _ = writeln!(out, "  node [style=filled, fontname=\"Helvetica\"];");

    for c in graph.claims() {
        // Purple outline marks a claim developed in another document.
        let outline = if c.expands.is_some() { ", color=\"purple\", penwidth=2" } else { "" };
        let _ = writeln!(
            out,
            "  \"{}\" [shape=box, fillcolor=\"{}\"{}, label=\"{}\"];",
            esc(c.id.as_str()),
            fill(status(&c.id)),
            outline,
            label(c.id.as_str(), &c.text)
        );
    }
    for e in graph.evidence() {
        let _ = writeln!(
            out,
            "  \"{}\" [shape=folder, fillcolor=\"{}\", label=\"{}\"];",
            esc(e.id.as_str()),
            fill(status(&e.id)),
            label(e.id.as_str(), &e.text)
        );
    }
    for a in graph.arguments() {
        let _ = writeln!(
            out,
            "  \"{}\" [shape=ellipse, fillcolor=\"white\", label=\"{}\\n{}\"];",
            esc(a.id.as_str()),
            esc(a.id.as_str()),
            a.block
        );
    }
    for d in graph.defeaters() {
        let _ = writeln!(
            out,
            "  \"{}\" [shape=octagon, fillcolor=\"{}\", label=\"{}\"];",
            esc(d.id.as_str()),
            if d.resolved { "lightgrey" } else { "white" },
            label(d.id.as_str(), &d.text)
        );
    }
    for a in graph.arguments() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", esc(a.top.as_str()), esc(a.id.as_str()));
        for s in &a.supports {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", esc(a.id.as_str()), esc(s.as_str()));
        }
        if let Some(side) = &a.side {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"side\"];",
                esc(a.id.as_str()),
                esc(side.as_str())
            );
        }
    }
    for d in graph.defeaters() {
        let kind = match d.kind {
            DefeaterKind::Undercut => "undercut",
            DefeaterKind::Rebuttal => "rebut",
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [style=dashed, label=\"{}\"];",
            esc(d.id.as_str()),
            esc(d.target.as_str()),
            kind
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::status::{propagate, NoExpansions};

    fn render(text: &str) -> String {
        let doc = parse(text).unwrap();
        let map = propagate(&doc.graph, &NoExpansions).unwrap();
        emit_dot(&doc.graph, &map)
    }

    #[test]
    fn one_claim() {
        let dot = render("claim C1 \"x\"");
        assert!(dot.starts_with("digraph case {"));
        assert_eq!(dot.matches("shape=box").count(), 1);
        assert!(dot.contains("\"C1\" [shape=box, fillcolor=\"white\""));
        assert!(dot.ends_with("}\n"));
    }

    #[test]
    fn rebuttal_edge_is_dashed() {
        let dot = render("claim C1 \"x\" status=green\ndefeater D1 kind=rebut target=C1 \"doubt\"");
        assert!(dot.contains("\"D1\" -> \"C1\" [style=dashed, label=\"rebut\"];"));
        assert!(dot.contains("\"C1\" [shape=box, fillcolor=\"red\""));
    }

    #[test]
    fn arguments_are_labelled_ellipses() {
        let dot = render("claim T \"t\"\nevidence E \"e \\\"quoted\\\"\"\nargument A block=evidence claim=T from=E");
        assert!(dot.contains("\"A\" [shape=ellipse, fillcolor=\"white\", label=\"A\\nevidence\"];"));
        assert!(dot.contains("shape=folder"));
        assert!(dot.contains("e \\\"quoted\\\""));
    }
}
