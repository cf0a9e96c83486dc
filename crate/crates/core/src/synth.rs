//! Synthetic corpora with a planted taxonomy.
//!
//! Every record picks one planted `(broader, narrower)` name pair. With
//! probability `idiosyncrasy_rate` it is replaced by a pair of junk names
//! (`junk0000` … from a reserved namespace), otherwise with probability
//! `inversion_rate` it is emitted reversed.
//!
//! Randomness comes from ChaCha8 seeded through `seed_from_u64`, a
//! documented, platform-independent stream: the same spec always yields the
//! same corpus.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aggregate::Edge;
use crate::corpus::{Corpus, RawRecord};
use crate::error::{Error, Result};
use crate::normalize::{normalize_name, NormalizerConfig};

fn default_junk_vocabulary() -> usize {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    /// Planted `(collection name, set name)` pairs. Each name must normalize
    /// to exactly one term.
    pub taxonomy: Vec<(String, String)>,
    pub users: usize,
    pub records_per_user: usize,
    #[serde(default)]
    pub inversion_rate: f64,
    #[serde(default)]
    pub idiosyncrasy_rate: f64,
    #[serde(default)]
    pub seed: u64,
    /// Size of the junk name pool.
    #[serde(default = "default_junk_vocabulary")]
    pub junk_vocabulary: usize,
}

impl SynthSpec {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("synth spec {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.taxonomy.is_empty() {
            return bad("taxonomy must not be empty".into());
        }
        if self.users == 0 || self.records_per_user == 0 {
            return bad("users and records_per_user must be positive".into());
        }
        for (name, rate) in [
            ("inversion_rate", self.inversion_rate),
            ("idiosyncrasy_rate", self.idiosyncrasy_rate),
        ] {
            if !(0.0..1.0).contains(&rate) {
                return bad(format!("{name} must lie in [0, 1), got {rate}"));
            }
        }
        if self.inversion_rate + self.idiosyncrasy_rate >= 1.0 {
            return bad("inversion_rate + idiosyncrasy_rate must be below 1".into());
        }
        if self.idiosyncrasy_rate > 0.0 && self.junk_vocabulary < 2 {
            return bad("junk_vocabulary must hold at least 2 names".into());
        }
        self.planted_edges(&NormalizerConfig::default()).map(|_| ())
    }

    /// The planted taxonomy in term space.
    pub fn planted_edges(&self, cfg: &NormalizerConfig) -> Result<Vec<Edge>> {
        let single = |name: &str| {
            let mut terms = normalize_name(name, cfg);
            match terms.len() {
                1 => Ok(terms.remove(0)),
                n => Err(Error::Config(format!(
                    "taxonomy name `{name}` normalizes to {n} terms, expected 1"
                ))),
            }
        };
        self.taxonomy
            .iter()
            .map(|(b, n)| {
                let (b_term, n_term) = (single(b)?, single(n)?);
                if b_term == n_term || b_term.as_str().starts_with("junk") {
                    return Err(Error::Config(format!(
                        "unusable taxonomy pair `{b}` → `{n}`"
                    )));
                }
                Ok((b_term, n_term))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Planted,
    Inverted,
    Junk,
}

/// A generated record with how it was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledRecord {
    pub record: RawRecord,
    pub kind: RecordKind,
    /// Index into the taxonomy, absent for junk.
    pub edge: Option<usize>,
}

/// Generates records in emission order, before duplicate removal.
pub fn generate_labeled(spec: &SynthSpec) -> Result<Vec<LabeledRecord>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let width = spec.users.to_string().len().max(5);
    let mut out = Vec::with_capacity(spec.users * spec.records_per_user);
    for u in 0..spec.users {
        let user = format!("user{u:0width$}");
        for _ in 0..spec.records_per_user {
            let roll: f64 = rng.random();
            let labeled = if roll < spec.idiosyncrasy_rate {
                let a = rng.random_range(0..spec.junk_vocabulary);
                let mut b = rng.random_range(0..spec.junk_vocabulary - 1);
                if b >= a {
                    b += 1;
                }
                LabeledRecord {
                    record: RawRecord::new(&user, junk_name(a), junk_name(b)),
                    kind: RecordKind::Junk,
                    edge: None,
                }
            } else {
                let idx = rng.random_range(0..spec.taxonomy.len());
                let (broader, narrower) = &spec.taxonomy[idx];
                let inverted = roll < spec.idiosyncrasy_rate + spec.inversion_rate;
                let (c, s, kind) = if inverted {
                    (narrower, broader, RecordKind::Inverted)
                } else {
                    (broader, narrower, RecordKind::Planted)
                };
                LabeledRecord {
                    record: RawRecord::new(&user, c, s),
                    kind,
                    edge: Some(idx),
                }
            };
            out.push(labeled);
        }
    }
    Ok(out)
}

fn junk_name(i: usize) -> String {
    format!("junk{i:04}")
}

/// Generates a corpus; deterministic in the spec.
pub fn generate(spec: &SynthSpec) -> Result<Corpus> {
    Ok(Corpus::from_records(
        generate_labeled(spec)?.into_iter().map(|l| l.record),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::delegate_relations;
    use std::collections::BTreeSet;

    fn taxonomy() -> Vec<(String, String)> {
        [
            ("Animal", "Bird"),
            ("Animal", "Insect"),
            ("Country", "China"),
            ("Vehicle", "Car"),
            ("Bird", "Robin"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
    }

    fn spec() -> SynthSpec {
        SynthSpec {
            taxonomy: taxonomy(),
            users: 10,
            records_per_user: 5,
            inversion_rate: 0.0,
            idiosyncrasy_rate: 0.0,
            seed: 7,
            junk_vocabulary: 1000,
        }
    }

    #[test]
    fn zero_noise_only_planted_pairs() {
        let s = spec();
        let cfg = NormalizerConfig::default();
        let planted: BTreeSet<Edge> = s.planted_edges(&cfg).unwrap().into_iter().collect();
        let corpus = generate(&s).unwrap();
        assert!(!corpus.is_empty());
        for r in corpus.records() {
            for pair in delegate_relations(r, &cfg) {
                assert!(planted.contains(&pair), "{pair:?}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let mut s = spec();
        s.inversion_rate = 0.2;
        s.idiosyncrasy_rate = 0.1;
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
        let mut other = s.clone();
        other.seed = 8;
        assert_ne!(generate(&s).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn inversion_rate_within_binomial_bound() {
        let mut s = spec();
        s.users = 1000;
        s.records_per_user = 1;
        s.inversion_rate = 0.1;
        let labeled = generate_labeled(&s).unwrap();
        let inverted = labeled
            .iter()
            .filter(|l| l.kind == RecordKind::Inverted)
            .count();
        let frac = inverted as f64 / labeled.len() as f64;
        assert!((frac - 0.1).abs() <= 0.03, "fraction {frac}");
    }

    #[test]
    fn junk_never_collides_with_planted() {
        let mut s = spec();
        s.idiosyncrasy_rate = 0.5;
        let labeled = generate_labeled(&s).unwrap();
        assert!(labeled.iter().any(|l| l.kind == RecordKind::Junk));
        for l in labeled.iter().filter(|l| l.kind == RecordKind::Junk) {
            assert!(l.record.collection_name.starts_with("junk"));
            assert_ne!(l.record.collection_name, l.record.set_name);
        }
    }

    #[test]
    fn invalid_specs() {
        let mut s = spec();
        s.inversion_rate = 0.6;
        s.idiosyncrasy_rate = 0.4;
        assert!(matches!(generate(&s), Err(Error::Config(_))));

        let mut s = spec();
        s.taxonomy.clear();
        assert!(generate(&s).is_err());

        let mut s = spec();
        s.taxonomy.push(("Travel & Fun".into(), "China".into()));
        assert!(generate(&s).is_err());

        let mut s = spec();
        s.users = 0;
        assert!(generate(&s).is_err());

        let mut s = spec();
        s.inversion_rate = -0.1;
        assert!(generate(&s).is_err());
    }

    #[test]
    fn spec_json_defaults() {
        let s: SynthSpec = serde_json::from_str(
            r#"{"taxonomy": [["Animal", "Bird"]], "users": 3, "records_per_user": 2}"#,
        )
        .unwrap();
        assert_eq!(s.seed, 0);
        assert_eq!(s.junk_vocabulary, 1000);
        assert!(s.validate().is_ok());
    }
}
