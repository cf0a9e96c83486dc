//! Term-based subsumption baseline.
//!
//! Each record becomes a document holding its collection and set terms.
//! `x` subsumes `y` when `P(x|y) >= t` and `P(y|x) < t`, with probabilities
//! estimated from document co-occurrence. This only sees which terms appear
//! together, not which side of the collection/set relation they came from.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::aggregate::Edge;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::normalize::{normalize_name, NormalizerConfig, Term};

/// The terms of one record, as a bag of concepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermDocument {
    /// Index of the record in the corpus.
    pub doc_id: usize,
    pub terms: BTreeSet<Term>,
}

/// One document per record; records normalizing to nothing are dropped.
pub fn build_documents(corpus: &Corpus, cfg: &NormalizerConfig) -> Vec<TermDocument> {
    corpus
        .records()
        .iter()
        .enumerate()
        .filter_map(|(doc_id, r)| {
            let terms: BTreeSet<Term> = normalize_name(&r.collection_name, cfg)
                .into_iter()
                .chain(normalize_name(&r.set_name, cfg))
                .collect();
            (!terms.is_empty()).then_some(TermDocument { doc_id, terms })
        })
        .collect()
}

/// Document frequencies and pairwise co-occurrence counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CooccurrenceStats {
    freq: BTreeMap<Term, u32>,
    /// Keyed by the unordered pair, smaller term first.
    co: BTreeMap<(Term, Term), u32>,
}

impl CooccurrenceStats {
    pub fn freq(&self, term: &str) -> u32 {
        self.freq.get(term).copied().unwrap_or(0)
    }

    pub fn co(&self, x: &str, y: &str) -> u32 {
        if x == y {
            return self.freq(x);
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        match (Term::new(a), Term::new(b)) {
            (Some(a), Some(b)) => self.co.get(&(a, b)).copied().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn term_count(&self) -> usize {
        self.freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq.is_empty()
    }

    /// Co-occurring pairs `(a, b, count)` with `a < b`.
    pub fn pairs(&self) -> impl Iterator<Item = (&Term, &Term, u32)> + '_ {
        self.co.iter().map(|((a, b), &n)| (a, b, n))
    }

    /// Adds counts from a disjoint batch of documents.
    pub fn merge(&mut self, other: CooccurrenceStats) {
        for (t, n) in other.freq {
            *self.freq.entry(t).or_insert(0) += n;
        }
        for (p, n) in other.co {
            *self.co.entry(p).or_insert(0) += n;
        }
    }
}

pub fn count_cooccurrence<'a, I>(docs: I) -> CooccurrenceStats
where
    I: IntoIterator<Item = &'a TermDocument>,
{
    let mut stats = CooccurrenceStats::default();
    for doc in docs {
        let terms: Vec<&Term> = doc.terms.iter().collect();
        for (i, a) in terms.iter().enumerate() {
            *stats.freq.entry((*a).clone()).or_insert(0) += 1;
            for b in &terms[i + 1..] {
                *stats.co.entry(((*a).clone(), (*b).clone())).or_insert(0) += 1;
            }
        }
    }
    stats
}

fn check_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold <= 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "subsumption threshold must lie in (0, 1], got {threshold}"
        )))
    }
}

/// Does `x` subsume `y`: `P(x|y) >= threshold` and `P(y|x) < threshold`.
pub fn subsumes(x: &str, y: &str, stats: &CooccurrenceStats, threshold: f64) -> Result<bool> {
    check_threshold(threshold)?;
    let fx = stats.freq(x);
    let fy = stats.freq(y);
    for (term, f) in [(x, fx), (y, fy)] {
        if f == 0 {
            return Err(Error::UnknownTerm(term.to_string()));
        }
    }
    Ok(subsumes_counts(stats.co(x, y), fx, fy, threshold))
}

fn subsumes_counts(co: u32, freq_x: u32, freq_y: u32, threshold: f64) -> bool {
    let p_x_given_y = f64::from(co) / f64::from(freq_y);
    let p_y_given_x = f64::from(co) / f64::from(freq_x);
    p_x_given_y >= threshold && p_y_given_x < threshold
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub threshold: f64,
    /// Terms seen in fewer documents are not candidates.
    pub min_support: u32,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            threshold: 0.8,
            min_support: 2,
        }
    }
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<()> {
        check_threshold(self.threshold)
    }
}

/// All `x → y` with `x` subsuming `y`, over terms with at least
/// `min_support` documents.
pub fn induce_from_stats(
    stats: &CooccurrenceStats,
    cfg: &BaselineConfig,
) -> Result<BTreeSet<Edge>> {
    cfg.validate()?;
    let mut edges = BTreeSet::new();
    for (a, b, co) in stats.pairs() {
        let fa = stats.freq(a.as_str());
        let fb = stats.freq(b.as_str());
        if fa < cfg.min_support || fb < cfg.min_support {
            continue;
        }
        if subsumes_counts(co, fa, fb, cfg.threshold) {
            edges.insert((a.clone(), b.clone()));
        }
        if subsumes_counts(co, fb, fa, cfg.threshold) {
            edges.insert((b.clone(), a.clone()));
        }
    }
    Ok(edges)
}

pub fn induce_baseline_hierarchy(
    docs: &[TermDocument],
    cfg: &BaselineConfig,
) -> Result<BTreeSet<Edge>> {
    induce_from_stats(&count_cooccurrence(docs), cfg)
}

/// Side-by-side diff of two edge sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeComparison {
    pub only_relation: Vec<Edge>,
    pub only_baseline: Vec<Edge>,
    pub shared: Vec<Edge>,
}

impl EdgeComparison {
    pub fn counts(&self) -> (usize, usize, usize) {
        (
            self.only_relation.len(),
            self.only_baseline.len(),
            self.shared.len(),
        )
    }
}

pub fn compare_edges(relation: &BTreeSet<Edge>, baseline: &BTreeSet<Edge>) -> EdgeComparison {
    EdgeComparison {
        only_relation: relation.difference(baseline).cloned().collect(),
        only_baseline: baseline.difference(relation).cloned().collect(),
        shared: relation.intersection(baseline).cloned().collect(),
    }
}
