//! Relation delegation, per-direction user support, and conflict resolution.
//!
//! A record `(user, C, S)` says every term of `C` is broader than every term
//! of `S`. For each directed term pair we count how many distinct users make
//! that claim, then keep or drop the pair by comparing its support with the
//! support of the reverse direction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, RawRecord};
use crate::error::{Error, Result};
use crate::normalize::{normalize_name, NormalizerConfig, Term};

/// A directed `broader → narrower` pair.
pub type Edge = (Term, Term);

/// All `c → s` term pairs implied by one record, self-pairs excluded.
pub fn delegate_relations(record: &RawRecord, cfg: &NormalizerConfig) -> BTreeSet<Edge> {
    let broader = normalize_name(&record.collection_name, cfg);
    if broader.is_empty() {
        return BTreeSet::new();
    }
    let narrower = normalize_name(&record.set_name, cfg);
    let mut pairs = BTreeSet::new();
    for c in &broader {
        for s in &narrower {
            if c != s {
                pairs.insert((c.clone(), s.clone()));
            }
        }
    }
    pairs
}

/// One directed pair with its distinct-user support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTally {
    pub broader: Term,
    pub narrower: Term,
    pub user_support: u32,
}

/// Distinct-user support for every delegated pair.
///
/// Unseen pairs have support 0. Tallies over disjoint user populations can
/// be combined with [`Tallies::merge`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tallies {
    support: BTreeMap<Edge, u32>,
}

impl Tallies {
    /// Tally for a single user: every pair the user's records delegate,
    /// counted once.
    pub fn for_user<'a, I>(records: I, cfg: &NormalizerConfig) -> Self
    where
        I: IntoIterator<Item = &'a RawRecord>,
    {
        let mut pairs = BTreeSet::new();
        for record in records {
            pairs.extend(delegate_relations(record, cfg));
        }
        Tallies {
            support: pairs.into_iter().map(|p| (p, 1)).collect(),
        }
    }

    /// Adds another tally computed over a disjoint set of users.
    pub fn merge(&mut self, other: Tallies) {
        for (pair, n) in other.support {
            *self.support.entry(pair).or_insert(0) += n;
        }
    }

    pub fn support(&self, broader: &Term, narrower: &Term) -> u32 {
        self.support
            .get(&(broader.clone(), narrower.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&Term, &Term, u32)> + '_ {
        self.support.iter().map(|((b, n), &v)| (b, n, v))
    }

    pub fn to_vec(&self) -> Vec<RelationTally> {
        self.iter()
            .map(|(b, n, v)| RelationTally {
                broader: b.clone(),
                narrower: n.clone(),
                user_support: v,
            })
            .collect()
    }

    /// Every term appearing in any tallied pair.
    pub fn concepts(&self) -> BTreeSet<&Term> {
        self.support.keys().flat_map(|(b, n)| [b, n]).collect()
    }

    /// TSV `broader, narrower, user_support`, support descending then
    /// lexicographic.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut rows: Vec<_> = self.iter().collect();
        rows.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| (a.0, a.1).cmp(&(b.0, b.1))));
        for (b, n, v) in rows {
            writeln!(out, "{b}\t{n}\t{v}")?;
        }
        Ok(())
    }
}

impl FromIterator<RelationTally> for Tallies {
    /// Collects explicit tallies; zero-support entries and self-pairs are
    /// ignored, repeated pairs are summed.
    fn from_iter<I: IntoIterator<Item = RelationTally>>(iter: I) -> Self {
        let mut support = BTreeMap::new();
        for t in iter {
            if t.user_support == 0 || t.broader == t.narrower {
                continue;
            }
            *support.entry((t.broader, t.narrower)).or_insert(0) += t.user_support;
        }
        Tallies { support }
    }
}

/// Counts, for every delegated pair, the number of distinct users asserting
/// it.
pub fn tally_users(corpus: &Corpus, cfg: &NormalizerConfig) -> Tallies {
    let mut by_user: HashMap<&str, Vec<&RawRecord>> = HashMap::new();
    for record in corpus.records() {
        by_user
            .entry(record.user_id.as_str())
            .or_default()
            .push(record);
    }
    let mut total = Tallies::default();
    for records in by_user.into_values() {
        total.merge(Tallies::for_user(records, cfg));
    }
    total
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    /// Keep `x → y` if more than one user asserts it and at most one user
    /// asserts `y → x`.
    Hard,
    /// Keep `x → y` if more than one user asserts it and no more users
    /// assert `y → x` than `x → y`.
    #[default]
    Soft,
}

impl Constraint {
    pub fn keeps(self, forward: u32, reverse: u32) -> bool {
        forward > 1
            && match self {
                Constraint::Hard => reverse <= 1,
                Constraint::Soft => reverse <= forward,
            }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::Hard => "hard",
            Constraint::Soft => "soft",
        })
    }
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hard" => Ok(Constraint::Hard),
            "soft" => Ok(Constraint::Soft),
            other => Err(Error::Config(format!("unknown constraint `{other}`"))),
        }
    }
}

/// A relation kept by conflict resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetainedRelation {
    pub broader: Term,
    pub narrower: Term,
    pub support: u32,
    pub reverse_support: u32,
}

impl RetainedRelation {
    /// Both directions survived with equal support (soft ties only).
    pub fn is_symmetric(&self) -> bool {
        self.support == self.reverse_support
    }
}

/// Relations surviving a constraint, in lexicographic pair order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    constraint: Constraint,
    relations: BTreeMap<Edge, RetainedRelation>,
}

impl RelationSet {
    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn contains(&self, broader: &str, narrower: &str) -> bool {
        self.relations
            .keys()
            .any(|(b, n)| b.as_str() == broader && n.as_str() == narrower)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.relations.keys()
    }

    pub fn relations(&self) -> impl Iterator<Item = &RetainedRelation> + '_ {
        self.relations.values()
    }

    /// Pairs retained in both directions (possible only under the soft
    /// constraint, at equal support). Each unordered pair appears once, in
    /// lexicographic order.
    pub fn symmetric_pairs(&self) -> Vec<Edge> {
        self.relations
            .values()
            .filter(|r| r.is_symmetric() && r.broader < r.narrower)
            .map(|r| (r.broader.clone(), r.narrower.clone()))
            .collect()
    }

    /// TSV `broader, narrower, support, reverse_support, symmetric`.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in self.relations.values() {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.broader,
                r.narrower,
                r.support,
                r.reverse_support,
                u8::from(r.is_symmetric())
            )?;
        }
        Ok(())
    }
}

/// Applies the hard or soft constraint to every tallied pair.
pub fn resolve_conflicts(tallies: &Tallies, constraint: Constraint) -> RelationSet {
    let mut relations = BTreeMap::new();
    for (broader, narrower, support) in tallies.iter() {
        let reverse_support = tallies.support(narrower, broader);
        if constraint.keeps(support, reverse_support) {
            relations.insert(
                (broader.clone(), narrower.clone()),
                RetainedRelation {
                    broader: broader.clone(),
                    narrower: narrower.clone(),
                    support,
                    reverse_support,
                },
            );
        }
    }
    RelationSet {
        constraint,
        relations,
    }
}
