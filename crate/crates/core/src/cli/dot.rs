use std::fmt::Write;

use super::QuiverDocument;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: types (or multiplicities) as edge labels, degree-1
/// arrows dashed. Output depends only on the document.
pub fn serialize_dot(doc: &QuiverDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {{", quote(doc.command.name()));
    let _ = writeln!(s, "  node [shape=circle];");
    for v in &doc.vertices {
        let label = if v.dimension > 1 {
            format!("{} [{}]", v.label, v.dimension)
        } else {
            v.label.clone()
        };
        let _ = writeln!(s, "  v{} [label={}];", v.id, quote(&label));
    }
    for a in &doc.arrows {
        let label = match (a.ty, a.mult) {
            (Some(t), _) => t.to_string(),
            (None, Some(m)) => m.to_string(),
            (None, None) => String::new(),
        };
        let style = if a.degree == Some(1) {
            "dashed"
        } else {
            "solid"
        };
        let _ = writeln!(
            s,
            "  v{} -> v{} [id={}, label={}, style={style}];",
            a.source,
            a.target,
            quote(&format!("a{}", a.id)),
            quote(&label)
        );
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::{ArrowEntry, Command, Metadata, VertexEntry};
    use crate::lattice::Kind;

    #[test]
    fn renders_loops_and_styles() {
        let mut doc = QuiverDocument::new(
            Command::Skew,
            Metadata {
                kind: Kind::C,
                lattice: None,
                normal_order: None,
                group_order: None,
                root_order: None,
                scalar_convention: None,
            },
        );
        doc.vertices.push(VertexEntry {
            id: 0,
            label: "(0,1)/1".into(),
            dimension: 3,
        });
        doc.arrows.push(ArrowEntry {
            id: 0,
            source: 0,
            target: 0,
            ty: None,
            mult: Some(2),
            degree: Some(1),
        });
        let dot = serialize_dot(&doc);
        assert_eq!(
            dot,
            "digraph \"skew\" {\n  node [shape=circle];\n  v0 [label=\"(0,1)/1 [3]\"];\n  \
             v0 -> v0 [id=\"a0\", label=\"2\", style=dashed];\n}\n"
        );
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}
