//! Graphviz emission for Hasse diagrams.

use std::fmt::Write;

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders a Hasse diagram bottom-up. `covers` are directed edges from the
/// lower to the upper element; `dashed` pairs are drawn as undirected dashed
/// edges (used for orthocomplements).
pub fn hasse(name: &str, labels: &[String], covers: &[(usize, usize)], dashed: &[(usize, usize)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
    out.push_str("  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(l));
    }
    for (a, b) in covers {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    for (a, b) in dashed {
        let _ = writeln!(out, "  n{a} -> n{b} [dir=none, style=dashed, constraint=false, color=gray];");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emits_digraph() {
        let labels = vec!["0".to_string(), "a\"".to_string()];
        let dot = hasse("p", &labels, &[(0, 1)], &[(0, 1)]);
        assert!(dot.starts_with("digraph \"p\" {"));
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.contains("label=\"a\\\"\""));
        assert!(dot.contains("style=dashed"));
        assert!(dot.trim_end().ends_with('}'));
    }
}
