//! The concept graph: pruning by degree ratio, linking, subgraph views.
//!
//! After conflict resolution some concepts ("all set", "occasion") sit above
//! a large number of children while having almost no parents. The ratio
//!
//! ```text
//! R(x) = (dout(x) + ε) / (din(x) + ε)
//! ```
//!
//! grows with how uninformative a concept is. [`prune_concepts`] discards the
//! `top_k` concepts with the highest ratio in a single ranking pass; the
//! remaining relations form the linked folksonomy.

mod export;
mod subgraph;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Bound;

use serde::{Deserialize, Serialize};

use crate::aggregate::{Edge, RelationSet};
use crate::error::{Error, Result};
use crate::normalize::Term;

pub use export::{export_graph, parse_edge_tsv, ExportFormat, Exportable};
pub use subgraph::{extract_subgraph, extract_subgraph_traced, Role, SubgraphView};

/// Directed `broader → narrower` graph over concept terms.
///
/// Degrees count distinct neighbors; edges carry no weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConceptGraph {
    children: BTreeMap<Term, BTreeSet<Term>>,
    parents: BTreeMap<Term, BTreeSet<Term>>,
}

impl ConceptGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<I>(edges: I) -> Self
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Self::new();
        for (b, n) in edges {
            g.add_edge(b, n);
        }
        g
    }

    pub fn from_relations(relations: &RelationSet) -> Self {
        Self::from_edges(relations.edges().cloned())
    }

    pub fn add_node(&mut self, term: Term) {
        self.parents.entry(term.clone()).or_default();
        self.children.entry(term).or_default();
    }

    /// Adds `broader → narrower`. Self-loops are ignored; returns whether
    /// the edge was new.
    pub fn add_edge(&mut self, broader: Term, narrower: Term) -> bool {
        if broader == narrower {
            return false;
        }
        self.add_node(broader.clone());
        self.add_node(narrower.clone());
        self.parents
            .get_mut(&narrower)
            .expect("node just added")
            .insert(broader.clone());
        self.children
            .get_mut(&broader)
            .expect("node just added")
            .insert(narrower)
    }

    /// Removes a node and all its incident edges.
    pub fn remove_node(&mut self, term: &str) -> bool {
        let Some(children) = self.children.remove(term) else {
            return false;
        };
        let parents = self.parents.remove(term).unwrap_or_default();
        for child in &children {
            if let Some(ps) = self.parents.get_mut(child.as_str()) {
                ps.remove(term);
            }
        }
        for parent in &parents {
            if let Some(cs) = self.children.get_mut(parent.as_str()) {
                cs.remove(term);
            }
        }
        true
    }

    pub fn contains(&self, term: &str) -> bool {
        self.children.contains_key(term)
    }

    pub fn get_term(&self, term: &str) -> Option<&Term> {
        self.children.get_key_value(term).map(|(k, _)| k)
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn edge_count(&self) -> usize {
        self.children.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    /// Nodes in lexicographic order.
    pub fn nodes(&self) -> impl Iterator<Item = &Term> + '_ {
        self.children.keys()
    }

    /// Edges in lexicographic `(broader, narrower)` order.
    pub fn edges(&self) -> impl Iterator<Item = (&Term, &Term)> + '_ {
        self.children
            .iter()
            .flat_map(|(b, cs)| cs.iter().map(move |n| (b, n)))
    }

    pub fn children(&self, term: &str) -> Option<&BTreeSet<Term>> {
        self.children.get(term)
    }

    pub fn parents(&self, term: &str) -> Option<&BTreeSet<Term>> {
        self.parents.get(term)
    }

    pub fn out_degree(&self, term: &str) -> Option<usize> {
        self.children.get(term).map(BTreeSet::len)
    }

    pub fn in_degree(&self, term: &str) -> Option<usize> {
        self.parents.get(term).map(BTreeSet::len)
    }

    /// Up to `n` node names on each side of where `query` would sort.
    pub fn nearest_terms(&self, query: &str, n: usize) -> Vec<String> {
        let before = self
            .children
            .range::<str, _>((Bound::Unbounded, Bound::Excluded(query)))
            .rev()
            .take(n)
            .map(|(k, _)| k.to_string())
            .collect::<Vec<_>>();
        let after = self
            .children
            .range::<str, _>((Bound::Included(query), Bound::Unbounded))
            .take(n)
            .map(|(k, _)| k.to_string());
        before.into_iter().rev().chain(after).collect()
    }
}

/// Smoothing and cutoff for concept pruning.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PruneConfig {
    pub epsilon: f64,
    pub top_k: usize,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig {
            epsilon: 0.01,
            top_k: 200,
        }
    }
}

impl PruneConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::Config(format!(
                "epsilon must be a positive finite number, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// `(dout + ε) / (din + ε)` for one concept.
pub fn degree_ratio(g: &ConceptGraph, term: &str, cfg: &PruneConfig) -> Result<f64> {
    match (g.out_degree(term), g.in_degree(term)) {
        (Some(dout), Some(din)) => Ok(smoothed_ratio(dout, din, cfg.epsilon)),
        _ => Err(Error::UnknownConcept(term.to_string())),
    }
}

fn smoothed_ratio(dout: usize, din: usize, epsilon: f64) -> f64 {
    (dout as f64 + epsilon) / (din as f64 + epsilon)
}

/// A concept with the degrees and ratio it had when ranked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedConcept {
    pub term: Term,
    pub out_degree: usize,
    pub in_degree: usize,
    pub ratio: f64,
}

/// Every node ranked by ratio, highest first; ties go to the
/// lexicographically smaller term.
pub fn rank_by_ratio(g: &ConceptGraph, epsilon: f64) -> Vec<RankedConcept> {
    let mut ranked: Vec<RankedConcept> = g
        .nodes()
        .map(|t| {
            let dout = g.out_degree(t.as_str()).unwrap_or(0);
            let din = g.in_degree(t.as_str()).unwrap_or(0);
            RankedConcept {
                term: t.clone(),
                out_degree: dout,
                in_degree: din,
                ratio: smoothed_ratio(dout, din, epsilon),
            }
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.ratio
            .total_cmp(&a.ratio)
            .then_with(|| a.term.cmp(&b.term))
    });
    ranked
}

/// The pruned graph together with what was removed.
#[derive(Clone, Debug, PartialEq)]
pub struct Pruned {
    pub graph: ConceptGraph,
    /// Removed concepts in rank order.
    pub removed: Vec<RankedConcept>,
}

/// Removes the `top_k` highest-ratio concepts (or all of them, if fewer)
/// and their incident edges. Concepts left without edges stay in the graph.
pub fn prune_graph(mut graph: ConceptGraph, cfg: &PruneConfig) -> Result<Pruned> {
    cfg.validate()?;
    let removed: Vec<RankedConcept> = rank_by_ratio(&graph, cfg.epsilon)
        .into_iter()
        .take(cfg.top_k)
        .collect();
    for concept in &removed {
        graph.remove_node(concept.term.as_str());
    }
    Ok(Pruned { graph, removed })
}

/// Links retained relations into a graph and prunes it.
pub fn prune_concepts(relations: &RelationSet, cfg: &PruneConfig) -> Result<Pruned> {
    prune_graph(ConceptGraph::from_relations(relations), cfg)
}
