//! DOT and JSON renderings. All output is deterministic: elements, atoms and
//! edges are emitted in index order.

use std::fmt::Write;

use super::{ContextHypergraph, GreechieDiagram};
use crate::error::Result;
use crate::lattice::{FiniteOrtholattice, LatticeTable};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Hasse diagram: one node per element, one edge per covering pair,
/// directed from the lower element to the upper one.
pub fn lattice_to_dot(l: &FiniteOrtholattice) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n");
    for x in l.elements() {
        writeln!(out, "  {};", quote(l.name(x))).unwrap();
    }
    for (a, b) in l.covering_pairs() {
        writeln!(out, "  {} -> {};", quote(l.name(a)), quote(l.name(b))).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Lattice table JSON; requires bounds named `0` and `1`.
pub fn lattice_to_json(l: &FiniteOrtholattice) -> Result<String> {
    Ok(LatticeTable::from_lattice(l)?.to_json())
}

fn incidence_dot(kind: &str, points: &[String], sets: &[Vec<usize>], set_label: &str) -> String {
    let mut out = format!("graph {kind} {{\n");
    for (i, name) in points.iter().enumerate() {
        writeln!(out, "  p{i} [label={}, shape=circle];", quote(name)).unwrap();
    }
    for (k, _) in sets.iter().enumerate() {
        writeln!(out, "  s{k} [label={}, shape=box];", quote(&format!("{set_label}{k}"))).unwrap();
    }
    for (k, set) in sets.iter().enumerate() {
        for &i in set {
            writeln!(out, "  p{i} -- s{k};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Atom/block incidence graph.
pub fn diagram_to_dot(d: &GreechieDiagram) -> String {
    incidence_dot("greechie", d.atoms(), d.blocks(), "B")
}

/// Outcome/context incidence graph.
pub fn hypergraph_to_dot(h: &ContextHypergraph) -> String {
    incidence_dot("contexts", h.outcomes(), h.contexts(), "C")
}

pub fn diagram_to_json(d: &GreechieDiagram) -> String {
    let blocks: Vec<Vec<&str>> = (0..d.blocks().len()).map(|k| d.block_names(k)).collect();
    serde_json::to_string_pretty(&serde_json::json!({ "atoms": d.atoms(), "blocks": blocks }))
        .expect("diagram serializes")
}

pub fn hypergraph_to_json(h: &ContextHypergraph) -> String {
    let contexts: Vec<Vec<&str>> = (0..h.contexts().len()).map(|k| h.context_names(k)).collect();
    serde_json::to_string_pretty(&serde_json::json!({ "outcomes": h.outcomes(), "contexts": contexts }))
        .expect("hypergraph serializes")
}

/// Text accepted by [`super::parse_greechie`].
pub fn diagram_to_gdl(d: &GreechieDiagram) -> String {
    let mut out = String::new();
    for k in 0..d.blocks().len() {
        writeln!(out, "block: {}", d.block_names(k).join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greechie::{paste_to_lattice, parse_greechie};
    use crate::lattice::fixtures::*;

    #[test]
    fn b4_json_has_covering_pairs_only() {
        let t: serde_json::Value = serde_json::from_str(&lattice_to_json(&b4()).unwrap()).unwrap();
        assert_eq!(t["elements"].as_array().unwrap().len(), 4);
        assert_eq!(t["leq"].as_array().unwrap().len(), 4);
        assert_eq!(t["neg"].as_object().unwrap().len(), 4);
    }

    #[test]
    fn mo2_hasse_diagram() {
        let l = paste_to_lattice(&parse_greechie("block: a1 a2\nblock: b1 b2").unwrap()).unwrap();
        let dot = lattice_to_dot(&l);
        for a in ["a1", "a2", "b1", "b2"] {
            assert!(dot.contains(&format!("  \"0\" -> \"{a}\";\n")));
            assert!(dot.contains(&format!("  \"{a}\" -> \"1\";\n")));
        }
        assert_eq!(dot.matches("->").count(), 8);
        assert_eq!(dot, lattice_to_dot(&l));
    }

    #[test]
    fn quoting_escapes() {
        assert_eq!(quote(r#"a"b\c"#), r#""a\"b\\c""#);
        assert_eq!(quote("a'"), "\"a'\"");
    }

    #[test]
    fn diagram_exports() {
        let d = parse_greechie("block: a b c\nblock: c d e").unwrap();
        assert_eq!(parse_greechie(&diagram_to_gdl(&d)).unwrap(), d);
        let dot = diagram_to_dot(&d);
        assert_eq!(dot.matches(" -- ").count(), 6);
        let j: serde_json::Value = serde_json::from_str(&diagram_to_json(&d)).unwrap();
        assert_eq!(j["blocks"][1], serde_json::json!(["c", "d", "e"]));
        let j: serde_json::Value = serde_json::from_str(&hypergraph_to_json(&d.to_hypergraph())).unwrap();
        assert_eq!(j["outcomes"].as_array().unwrap().len(), 5);
        assert!(hypergraph_to_dot(&d.to_hypergraph()).starts_with("graph contexts {"));
    }
}
