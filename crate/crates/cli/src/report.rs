//! Rendering of reports. Every report is built once as a JSON value; the
//! text form is a direct rendering of that value, so both carry the same
//! decisions.

use serde_json::Value;
use taylor_edges::edges::EdgeGraph;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(if *b { "yes" } else { "no" }.into()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    match v {
        Value::Array(xs) => {
            let parts: Option<Vec<String>> = xs.iter().map(scalar).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        _ => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match inline(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Indented `key: value` lines; booleans print as yes/no.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// The edge digraph with a fixed legend: s solid, as-only dashed, sm-only
/// dotted. Undecided pairs are listed in the header and not drawn.
pub fn to_dot(g: &EdgeGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("// edges of {}\n", g.algebra));
    out.push_str("// legend: s solid, as-only dashed, sm-only dotted\n");
    if g.unknown.is_empty() {
        out.push_str("// unknown: none\n");
    } else {
        let pairs: Vec<String> = g.unknown.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        out.push_str(&format!("// unknown: {}\n", pairs.join(" ")));
    }
    out.push_str(&format!("digraph \"{}\" {{\n", g.algebra.replace('"', "\\\"")));
    for x in 0..g.size {
        out.push_str(&format!("  {x};\n"));
    }
    for a in 0..g.size {
        for b in 0..g.size {
            if a == b {
                continue;
            }
            let style = match (g.has_as(a, b), g.has_sm(a, b)) {
                (true, true) => "solid",
                (true, false) => "dashed",
                (false, true) => "dotted",
                (false, false) => continue,
            };
            out.push_str(&format!("  {a} -> {b} [style={style}];\n"));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;
    use taylor_edges::catalog;
    use taylor_edges::edges::{compute_edges, EdgeConfig};

    #[test]
    fn text_rendering() {
        let v = json!({"name": "x", "ok": true, "list": [1, 2], "nested": {"a": null}, "rows": [{"b": false}]});
        assert_eq!(
            to_text(&v),
            "name: x\nok: yes\nlist: [1, 2]\nnested:\n  a: none\nrows:\n  -\n    b: no\n"
        );
    }

    #[test]
    fn semilattice_dot() {
        let g = compute_edges(&catalog::semilattice(), &EdgeConfig::default()).unwrap();
        let dot = to_dot(&g);
        assert!(dot.contains("  1 -> 0 [style=solid];\n"), "{dot}");
        assert!(!dot.contains("0 -> 1"));
    }
}
