use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::ConceptGraph;
use crate::aggregate::Edge;
use crate::error::{Error, Result};
use crate::normalize::Term;

/// Position of a node relative to the focus concept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Focus,
    Parent,
    Child,
    Descendant,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Focus => "focus",
            Role::Parent => "parent",
            Role::Child => "child",
            Role::Descendant => "descendant",
        }
    }

    pub fn fill_color(self) -> &'static str {
        match self {
            Role::Focus => "yellow",
            Role::Parent => "pink",
            Role::Child => "green",
            Role::Descendant => "blue",
        }
    }
}

/// The neighborhood of one concept: its parents, children and everything
/// reachable below the children.
///
/// Role sets are disjoint. A node that is both an in- and out-neighbor of
/// the focus (a 2-cycle) is a child; a parent also reachable from below
/// stays a parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphView {
    pub focus: Term,
    pub parents: BTreeSet<Term>,
    pub children: BTreeSet<Term>,
    pub descendants: BTreeSet<Term>,
    /// Every graph edge whose endpoints are both in the view.
    pub edges: BTreeSet<Edge>,
    pub roles: BTreeMap<Term, Role>,
}

impl SubgraphView {
    pub fn node_count(&self) -> usize {
        self.roles.len()
    }

    pub fn role(&self, term: &str) -> Option<Role> {
        self.roles.get(term).copied()
    }
}

/// Extracts the view around `focus`, following out-edges breadth-first.
///
/// `max_depth` of 1 stops at the children; `None` follows every reachable
/// node. Each node is expanded at most once, so cycles terminate.
pub fn extract_subgraph(
    g: &ConceptGraph,
    focus: &str,
    max_depth: Option<usize>,
) -> Result<SubgraphView> {
    extract_subgraph_traced(g, focus, max_depth, |_| {})
}

/// [`extract_subgraph`] calling `on_expand` for each node whose out-edges
/// are followed.
pub fn extract_subgraph_traced<F>(
    g: &ConceptGraph,
    focus: &str,
    max_depth: Option<usize>,
    mut on_expand: F,
) -> Result<SubgraphView>
where
    F: FnMut(&Term),
{
    if max_depth == Some(0) {
        return Err(Error::Config("max_depth must be at least 1".into()));
    }
    let focus = g
        .get_term(focus)
        .ok_or_else(|| Error::UnknownConcept(focus.to_string()))?
        .clone();

    let mut depth_of: BTreeMap<&Term, usize> = BTreeMap::new();
    depth_of.insert(&focus, 0);
    let mut queue = VecDeque::from([(&focus, 0usize)]);
    while let Some((node, depth)) = queue.pop_front() {
        on_expand(node);
        if max_depth.is_some_and(|max| depth >= max) {
            continue;
        }
        for child in g.children(node.as_str()).into_iter().flatten() {
            if !depth_of.contains_key(child) {
                depth_of.insert(child, depth + 1);
                queue.push_back((child, depth + 1));
            }
        }
    }

    let children: BTreeSet<Term> = depth_of
        .iter()
        .filter(|(_, &d)| d == 1)
        .map(|(t, _)| (*t).clone())
        .collect();
    let parents: BTreeSet<Term> = g
        .parents(focus.as_str())
        .into_iter()
        .flatten()
        .filter(|p| !children.contains(*p))
        .cloned()
        .collect();
    let descendants: BTreeSet<Term> = depth_of
        .iter()
        .filter(|(t, &d)| d >= 2 && !parents.contains(**t))
        .map(|(t, _)| (*t).clone())
        .collect();

    let mut roles = BTreeMap::new();
    roles.insert(focus.clone(), Role::Focus);
    roles.extend(children.iter().map(|t| (t.clone(), Role::Child)));
    roles.extend(parents.iter().map(|t| (t.clone(), Role::Parent)));
    roles.extend(descendants.iter().map(|t| (t.clone(), Role::Descendant)));

    let edges = roles
        .keys()
        .flat_map(|b| {
            g.children(b.as_str())
                .into_iter()
                .flatten()
                .filter(|n| roles.contains_key(*n))
                .map(move |n| (b.clone(), n.clone()))
        })
        .collect();

    Ok(SubgraphView {
        focus,
        parents,
        children,
        descendants,
        edges,
        roles,
    })
}
