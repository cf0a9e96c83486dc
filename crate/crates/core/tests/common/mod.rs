//! Fixtures and brute-force oracles shared by the integration suites.
//!
//! The oracles here recompute results straight from their definitions and
//! deliberately avoid the library's aggregation, resolution and baseline
//! code paths. Only name normalization is shared.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use folksonomy::normalize::normalize_name;
use folksonomy::synth::SynthSpec;
use folksonomy::{Constraint, Corpus, NormalizerConfig, RawRecord};

pub type Pair = (String, String);

/// Twenty planted broader/narrower name pairs; every name normalizes to one
/// term and no pair appears in both directions.
pub fn taxonomy_20() -> Vec<(String, String)> {
    [
        ("Animal", "Bird"),
        ("Animal", "Insect"),
        ("Animal", "Fish"),
        ("Bird", "Robin"),
        ("Bird", "Eagle"),
        ("Insect", "Butterfly"),
        ("Insect", "Beetle"),
        ("Country", "China"),
        ("Country", "France"),
        ("Country", "Japan"),
        ("France", "Paris"),
        ("China", "Beijing"),
        ("Japan", "Tokyo"),
        ("Vehicle", "Car"),
        ("Vehicle", "Truck"),
        ("Vehicle", "Bicycle"),
        ("Sport", "Soccer"),
        ("Sport", "Tennis"),
        ("Flower", "Rose"),
        ("Flower", "Tulip"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect()
}

pub fn synth_spec(
    users: usize,
    records_per_user: usize,
    inversion_rate: f64,
    seed: u64,
) -> SynthSpec {
    SynthSpec {
        taxonomy: taxonomy_20(),
        users,
        records_per_user,
        inversion_rate,
        idiosyncrasy_rate: 0.0,
        seed,
        junk_vocabulary: 1000,
    }
}

fn term_strings(name: &str, cfg: &NormalizerConfig) -> Vec<String> {
    normalize_name(name, cfg)
        .into_iter()
        .map(|t| t.into_string())
        .collect()
}

/// Materializes every `(user, collection term, set term)` triple, dedups
/// the triples, and counts users per term pair.
pub fn brute_force_tallies(records: &[RawRecord], cfg: &NormalizerConfig) -> BTreeMap<Pair, u32> {
    let mut triples: BTreeSet<(String, String, String)> = BTreeSet::new();
    for r in records {
        for c in term_strings(&r.collection_name, cfg) {
            for s in term_strings(&r.set_name, cfg) {
                if c != s {
                    triples.insert((r.user_id.clone(), c.clone(), s));
                }
            }
        }
    }
    let mut counts = BTreeMap::new();
    for (_, c, s) in triples {
        *counts.entry((c, s)).or_insert(0) += 1;
    }
    counts
}

/// Evaluates the hard/soft inequalities pair by pair.
pub fn oracle_resolve(tallies: &BTreeMap<Pair, u32>, constraint: Constraint) -> BTreeSet<Pair> {
    let d = |x: &str, y: &str| {
        tallies
            .get(&(x.to_string(), y.to_string()))
            .copied()
            .unwrap_or(0)
    };
    tallies
        .keys()
        .filter(|(x, y)| {
            let fwd = d(x, y);
            let rev = d(y, x);
            match constraint {
                Constraint::Hard => fwd > 1 && rev <= 1,
                Constraint::Soft => fwd > 1 && rev <= fwd,
            }
        })
        .cloned()
        .collect()
}

/// Records whose documents give freq(china) = 596, freq(countri) = 256 and
/// co(china, countri) = 6. The six shared documents come from five users
/// asserting Country → China (one of them twice, spelled differently).
pub fn china_countri_corpus() -> Corpus {
    let mut records = Vec::new();
    for u in 1..=5 {
        records.push(RawRecord::new(format!("cc{u}"), "Country", "China"));
    }
    records.push(RawRecord::new("cc1", "Countries", "China"));
    for u in 1..=590 {
        records.push(RawRecord::new(format!("t{u:03}"), "Travel", "China"));
    }
    for u in 1..=250 {
        records.push(RawRecord::new(format!("f{u:03}"), "Country", "France"));
    }
    Corpus::from_records(records)
}

/// Two-level nested fixture: every narrow document also holds its broad
/// term, each relation asserted by three users.
pub fn nested_corpus() -> Corpus {
    let tree = [
        ("Animal", ["Bird", "Fish", "Insect"]),
        ("Plant", ["Tree", "Flower", "Grass"]),
    ];
    let mut records = Vec::new();
    for (broad, narrows) in tree {
        for narrow in narrows {
            for u in 0..3 {
                records.push(RawRecord::new(format!("{narrow}-{u}"), broad, narrow));
            }
        }
    }
    Corpus::from_records(records)
}

/// Subsumption edges from raw document sets, by exhaustive pairwise check.
pub fn brute_force_subsumption(
    docs: &[BTreeSet<String>],
    threshold: f64,
    min_support: u32,
) -> BTreeSet<Pair> {
    let vocab: BTreeSet<&String> = docs.iter().flatten().collect();
    let freq = |x: &str| docs.iter().filter(|d| d.contains(x)).count() as u32;
    let co = |x: &str, y: &str| {
        docs.iter()
            .filter(|d| d.contains(x) && d.contains(y))
            .count() as u32
    };
    let mut out = BTreeSet::new();
    for x in &vocab {
        for y in &vocab {
            if x == y || freq(x) < min_support || freq(y) < min_support {
                continue;
            }
            let c = co(x, y) as f64;
            if c / freq(y) as f64 >= threshold && c / (freq(x) as f64) < threshold {
                out.insert(((*x).clone(), (*y).clone()));
            }
        }
    }
    out
}

/// Documents as plain string sets, one per record with a non-empty union.
pub fn raw_documents(corpus: &Corpus, cfg: &NormalizerConfig) -> Vec<BTreeSet<String>> {
    corpus
        .records()
        .iter()
        .map(|r| {
            term_strings(&r.collection_name, cfg)
                .into_iter()
                .chain(term_strings(&r.set_name, cfg))
                .collect::<BTreeSet<String>>()
        })
        .filter(|d| !d.is_empty())
        .collect()
}

const WORDS: &[&str] = &[
    "Travel",
    "China",
    "Country",
    "Countries",
    "Animals",
    "Birds",
    "Vacation",
    "Vacations",
    "Europe",
    "France",
    "Paris",
    "Nature",
    "Flowers",
    "Sports",
    "Soccer",
    "Family",
    "Holidays",
    "Cars",
    "Vehicles",
    "Art",
    "Music",
    "Misc",
    "The",
    "Beach",
    "Sunset",
];
const JOINERS: &[&str] = &[" & ", " / ", ", ", " ", " : ", " (", ") "];

fn random_name<R: rand::Rng>(rng: &mut R) -> String {
    let mut name = WORDS[rng.random_range(0..WORDS.len())].to_string();
    for _ in 0..rng.random_range(0..3) {
        name.push_str(JOINERS[rng.random_range(0..JOINERS.len())]);
        name.push_str(WORDS[rng.random_range(0..WORDS.len())]);
    }
    if rng.random_bool(0.2) {
        name = name.to_uppercase();
    }
    name
}

/// Records with compound, mixed-case names over a small vocabulary, so that
/// cross products, stopwords and case folding all come into play.
pub fn random_records<R: rand::Rng>(rng: &mut R, users: usize, records: usize) -> Vec<RawRecord> {
    (0..records)
        .map(|_| {
            let user = format!("u{}", rng.random_range(0..users));
            RawRecord::new(user, random_name(rng), random_name(rng))
        })
        .collect()
}
