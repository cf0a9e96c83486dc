use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ConceptGraph, Role, SubgraphView};
use crate::aggregate::Edge;
use crate::error::{Error, Result};
use crate::normalize::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Dot,
    Graphml,
    Tsv,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Dot => "dot",
            ExportFormat::Graphml => "graphml",
            ExportFormat::Tsv => "tsv",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(ExportFormat::Dot),
            "graphml" => Ok(ExportFormat::Graphml),
            "tsv" => Ok(ExportFormat::Tsv),
            other => Err(Error::Config(format!("unknown export format `{other}`"))),
        }
    }
}

/// Anything that can be written out as a node list plus edge list.
pub trait Exportable {
    /// Nodes in lexicographic order with their role, if the graph has roles.
    fn export_nodes(&self) -> Vec<(&Term, Option<Role>)>;
    /// Edges in lexicographic order.
    fn export_edges(&self) -> Vec<(&Term, &Term)>;
}

impl Exportable for ConceptGraph {
    fn export_nodes(&self) -> Vec<(&Term, Option<Role>)> {
        self.nodes().map(|t| (t, None)).collect()
    }

    fn export_edges(&self) -> Vec<(&Term, &Term)> {
        self.edges().collect()
    }
}

impl Exportable for SubgraphView {
    fn export_nodes(&self) -> Vec<(&Term, Option<Role>)> {
        self.roles.iter().map(|(t, r)| (t, Some(*r))).collect()
    }

    fn export_edges(&self) -> Vec<(&Term, &Term)> {
        self.edges.iter().map(|(b, n)| (b, n)).collect()
    }
}

/// Serializes a graph or view. Output depends only on the graph contents.
pub fn export_graph<G: Exportable + ?Sized>(g: &G, format: ExportFormat) -> String {
    match format {
        ExportFormat::Dot => to_dot(g),
        ExportFormat::Graphml => to_graphml(g),
        ExportFormat::Tsv => to_tsv(g),
    }
}

fn to_dot<G: Exportable + ?Sized>(g: &G) -> String {
    let mut out = String::from("digraph folksonomy {\n  node [style=filled];\n");
    for (term, role) in g.export_nodes() {
        match role {
            Some(role) => {
                let _ = writeln!(out, "  {} [fillcolor={}];", dot_id(term), role.fill_color());
            }
            None => {
                let _ = writeln!(out, "  {};", dot_id(term));
            }
        }
    }
    for (b, n) in g.export_edges() {
        let _ = writeln!(out, "  {} -> {};", dot_id(b), dot_id(n));
    }
    out.push_str("}\n");
    out
}

const DOT_KEYWORDS: [&str; 6] = ["node", "edge", "graph", "digraph", "subgraph", "strict"];

/// Bare identifier when DOT allows it, quoted string otherwise.
fn dot_id(term: &Term) -> String {
    let s = term.as_str();
    let ident = s.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !DOT_KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(s));
    let numeral = s.chars().all(|c| c.is_ascii_digit());
    if ident || numeral {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

fn to_graphml<G: Exportable + ?Sized>(g: &G) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n  \
         <key id=\"role\" for=\"node\" attr.name=\"role\" attr.type=\"string\"/>\n  \
         <graph id=\"folksonomy\" edgedefault=\"directed\">\n",
    );
    for (term, role) in g.export_nodes() {
        match role {
            Some(role) => {
                let _ = writeln!(
                    out,
                    "    <node id=\"{}\"><data key=\"role\">{}</data></node>",
                    xml_escape(term.as_str()),
                    role.as_str()
                );
            }
            None => {
                let _ = writeln!(out, "    <node id=\"{}\"/>", xml_escape(term.as_str()));
            }
        }
    }
    for (b, n) in g.export_edges() {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"/>",
            xml_escape(b.as_str()),
            xml_escape(n.as_str())
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn to_tsv<G: Exportable + ?Sized>(g: &G) -> String {
    let mut out = String::new();
    for (b, n) in g.export_edges() {
        let _ = writeln!(out, "{b}\t{n}");
    }
    out
}

/// Parses `broader TAB narrower` lines. Blank lines are skipped.
pub fn parse_edge_tsv(text: &str) -> Result<Vec<Edge>> {
    let mut edges = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: &str| Error::Malformed {
            line: idx + 1,
            reason: reason.to_string(),
        };
        let mut cols = line.split('\t');
        let (Some(b), Some(n), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(malformed("expected exactly 2 tab-separated columns"));
        };
        let b = Term::new(b).ok_or_else(|| malformed("invalid broader term"))?;
        let n = Term::new(n).ok_or_else(|| malformed("invalid narrower term"))?;
        edges.push((b, n));
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::extract_subgraph;
    use proptest::prelude::*;

    fn t(s: &str) -> Term {
        Term::new(s).unwrap()
    }

    fn bird_view() -> SubgraphView {
        let g = ConceptGraph::from_edges([(t("animal"), t("bird")), (t("bird"), t("robin"))]);
        extract_subgraph(&g, "bird", None).unwrap()
    }

    #[test]
    fn dot_colors_roles() {
        let dot = export_graph(&bird_view(), ExportFormat::Dot);
        assert!(dot.starts_with("digraph folksonomy {\n  node [style=filled];\n"));
        assert!(dot.contains("bird [fillcolor=yellow]"));
        assert!(dot.contains("animal [fillcolor=pink]"));
        assert!(dot.contains("robin [fillcolor=green]"));
        assert!(dot.contains("animal -> bird;"));
    }

    #[test]
    fn descendants_are_blue() {
        let g = ConceptGraph::from_edges([(t("a"), t("b")), (t("b"), t("c"))]);
        let v = extract_subgraph(&g, "a", None).unwrap();
        assert!(export_graph(&v, ExportFormat::Dot).contains("c [fillcolor=blue]"));
    }

    #[test]
    fn empty_graph_dot() {
        assert_eq!(
            export_graph(&ConceptGraph::new(), ExportFormat::Dot),
            "digraph folksonomy {\n  node [style=filled];\n}\n"
        );
    }

    #[test]
    fn export_is_deterministic() {
        let v = bird_view();
        for f in [ExportFormat::Dot, ExportFormat::Graphml, ExportFormat::Tsv] {
            assert_eq!(export_graph(&v, f), export_graph(&v.clone(), f));
        }
    }

    #[test]
    fn dot_quotes_when_needed() {
        assert_eq!(dot_id(&t("south africa")), "\"south africa\"");
        assert_eq!(dot_id(&t("2005")), "2005");
        assert_eq!(dot_id(&t("graph")), "\"graph\"");
        assert_eq!(dot_id(&t("köln")), "\"köln\"");
        assert_eq!(dot_id(&t("3d")), "\"3d\"");
    }

    #[test]
    fn graphml_carries_roles() {
        let xml = export_graph(&bird_view(), ExportFormat::Graphml);
        assert!(xml.contains("<node id=\"animal\"><data key=\"role\">parent</data></node>"));
        assert!(xml.contains("<edge source=\"bird\" target=\"robin\"/>"));
        assert!(xml.contains("edgedefault=\"directed\""));
        assert_eq!(xml_escape("a<&>\"'"), "a&lt;&amp;&gt;&quot;&apos;");
    }

    #[test]
    fn malformed_tsv() {
        assert!(matches!(
            parse_edge_tsv("a\tb\nc\n"),
            Err(Error::Malformed { line: 2, .. })
        ));
        assert!(parse_edge_tsv("a\tb\tc\n").is_err());
        assert!(parse_edge_tsv("a\t\n").is_err());
        assert!(parse_edge_tsv("").unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn tsv_round_trip(edges in proptest::collection::vec(("[a-z]{1,6}( [a-z]{1,4})?", "[a-z0-9]{1,6}"), 0..40)) {
            let g = ConceptGraph::from_edges(edges.into_iter().map(|(b, n)| (t(&b), t(&n))));
            let text = export_graph(&g, ExportFormat::Tsv);
            let back = ConceptGraph::from_edges(parse_edge_tsv(&text).unwrap());
            let a: Vec<_> = g.edges().collect();
            let b: Vec<_> = back.edges().collect();
            prop_assert_eq!(a, b);
        }
    }
}
