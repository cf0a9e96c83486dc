//! Loading and validation of raw `(user, collection, set)` records.
//!
//! Two line-oriented formats are accepted, both UTF-8:
//!
//! * JSONL: `{"user": "...", "collection": "...", "set": "..."}` per line.
//! * TSV: three tab-separated columns `user`, `collection`, `set`, no header.
//!
//! Blank lines are skipped. Exact duplicate records are dropped keeping the
//! first occurrence; records with an empty field are rejected and counted in
//! the [`LoadReport`].

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One user's statement that `set_name` sits under `collection_name`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RawRecord {
    #[serde(rename = "user")]
    pub user_id: String,
    #[serde(rename = "collection")]
    pub collection_name: String,
    #[serde(rename = "set")]
    pub set_name: String,
}

impl RawRecord {
    pub fn new(
        user_id: impl Into<String>,
        collection_name: impl Into<String>,
        set_name: impl Into<String>,
    ) -> Self {
        RawRecord {
            user_id: user_id.into(),
            collection_name: collection_name.into(),
            set_name: set_name.into(),
        }
    }

    fn rejection(&self) -> Option<&'static str> {
        if self.user_id.is_empty() {
            Some("empty user")
        } else if self.collection_name.trim().is_empty() {
            Some("empty collection name")
        } else if self.set_name.trim().is_empty() {
            Some("empty set name")
        } else {
            None
        }
    }
}

/// Deduplicated, validated records. Immutable once built.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    records: Vec<RawRecord>,
    user_count: usize,
}

impl Corpus {
    /// Builds a corpus from already-validated records, dropping exact
    /// duplicates while keeping first-seen order.
    ///
    /// Records violating the non-empty field rules are silently skipped;
    /// use [`Corpus::from_records_with_report`] to learn about them.
    pub fn from_records<I>(records: I) -> Self
    where
        I: IntoIterator<Item = RawRecord>,
    {
        Self::from_records_with_report(records).0
    }

    pub fn from_records_with_report<I>(records: I) -> (Self, LoadReport)
    where
        I: IntoIterator<Item = RawRecord>,
    {
        let mut report = LoadReport::default();
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for record in records {
            report.lines_read += 1;
            if record.rejection().is_some() {
                report.rejected += 1;
                continue;
            }
            if seen.contains(&record) {
                report.duplicates += 1;
                continue;
            }
            seen.insert(record.clone());
            kept.push(record);
        }
        let user_count = kept
            .iter()
            .map(|r| r.user_id.as_str())
            .collect::<HashSet<_>>()
            .len();
        report.accepted = kept.len();
        (
            Corpus {
                records: kept,
                user_count,
            },
            report,
        )
    }

    pub fn records(&self) -> &[RawRecord] {
        &self.records
    }

    pub fn record_count(&self) -> usize {
        self.records.len()
    }

    pub fn user_count(&self) -> usize {
        self.user_count
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn stats(&self) -> CorpusStats {
        corpus_stats(self)
    }

    /// Writes the corpus as JSONL in the load schema.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for record in &self.records {
            serde_json::to_writer(&mut out, record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Jsonl,
    Tsv,
}

impl InputFormat {
    /// Guesses the format from a file extension; anything but `.tsv` is JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("tsv") => InputFormat::Tsv,
            _ => InputFormat::Jsonl,
        }
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(InputFormat::Jsonl),
            "tsv" => Ok(InputFormat::Tsv),
            other => Err(Error::Config(format!("unknown input format `{other}`"))),
        }
    }
}

/// What happened to the input lines during a load.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub lines_read: usize,
    pub accepted: usize,
    pub duplicates: usize,
    pub rejected: usize,
}

impl fmt::Display for LoadReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "read {} records: {} accepted, {} exact duplicates dropped, {} rejected (empty field)",
            self.lines_read, self.accepted, self.duplicates, self.rejected
        )
    }
}

/// Loads a corpus file. Malformed lines abort the load with their line
/// number; records with empty fields are counted and skipped.
pub fn load_corpus(path: &Path, format: InputFormat) -> Result<(Corpus, LoadReport)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file), format).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_corpus<R: BufRead>(reader: R, format: InputFormat) -> Result<(Corpus, LoadReport)> {
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<input>", e))?;
        let line_no = idx + 1;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        records.push(parse_line(line, format, line_no)?);
    }
    Ok(Corpus::from_records_with_report(records))
}

fn parse_line(line: &str, format: InputFormat, line_no: usize) -> Result<RawRecord> {
    match format {
        InputFormat::Jsonl => serde_json::from_str(line).map_err(|e| Error::Malformed {
            line: line_no,
            reason: e.to_string(),
        }),
        InputFormat::Tsv => {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::Malformed {
                    line: line_no,
                    reason: format!("expected 3 tab-separated columns, found {}", fields.len()),
                });
            }
            Ok(RawRecord::new(fields[0], fields[1], fields[2]))
        }
    }
}

/// Counts over a corpus; names are compared as raw text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub records: usize,
    pub users: usize,
    pub collections: usize,
    pub sets: usize,
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let collections: BTreeSet<&str> = corpus
        .records
        .iter()
        .map(|r| r.collection_name.as_str())
        .collect();
    let sets: BTreeSet<&str> = corpus.records.iter().map(|r| r.set_name.as_str()).collect();
    CorpusStats {
        records: corpus.record_count(),
        users: corpus.user_count(),
        collections: collections.len(),
        sets: sets.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jsonl(lines: &[(&str, &str, &str)]) -> String {
        lines
            .iter()
            .map(|(u, c, s)| {
                serde_json::json!({"user": u, "collection": c, "set": s}).to_string() + "\n"
            })
            .collect()
    }

    fn load_str(text: &str, format: InputFormat) -> Result<(Corpus, LoadReport)> {
        read_corpus(text.as_bytes(), format)
    }

    #[test]
    fn exact_duplicates_collapse() {
        let text = jsonl(&[("u1", "Travel", "China"), ("u1", "Travel", "China")]);
        let (c, report) = load_str(&text, InputFormat::Jsonl).unwrap();
        assert_eq!(c.record_count(), 1);
        assert_eq!(c.user_count(), 1);
        assert_eq!(report.duplicates, 1);
    }

    #[test]
    fn empty_input() {
        let (c, report) = load_str("", InputFormat::Jsonl).unwrap();
        assert_eq!(c.record_count(), 0);
        assert_eq!(c.user_count(), 0);
        assert_eq!(report, LoadReport::default());
        assert_eq!(corpus_stats(&c), CorpusStats::default());
    }

    #[test]
    fn two_users_two_records() {
        let text = jsonl(&[("u1", "Travel", "China"), ("u2", "Travel", "Japan")]);
        let (c, _) = load_str(&text, InputFormat::Jsonl).unwrap();
        assert_eq!(c.record_count(), 2);
        assert_eq!(c.user_count(), 2);
        assert_eq!(
            corpus_stats(&c),
            CorpusStats {
                records: 2,
                users: 2,
                collections: 1,
                sets: 2
            }
        );
    }

    #[test]
    fn one_user_three_sets() {
        let c = Corpus::from_records([
            RawRecord::new("u1", "Travel", "China"),
            RawRecord::new("u1", "Travel", "Japan"),
            RawRecord::new("u1", "Travel", "Peru"),
        ]);
        assert_eq!(
            c.stats(),
            CorpusStats {
                records: 3,
                users: 1,
                collections: 1,
                sets: 3
            }
        );
    }

    #[test]
    fn tsv_parses_and_counts_rejects() {
        let text = "u1\tTravel\tChina\nu2\t  \tJapan\n\tTravel\tPeru\nu3\tTravel\tPeru\r\n\n";
        let (c, report) = load_str(text, InputFormat::Tsv).unwrap();
        assert_eq!(c.record_count(), 2);
        assert_eq!(report.rejected, 2);
        assert_eq!(report.lines_read, 4);
        assert_eq!(c.records()[1].set_name, "Peru");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = "u1\tTravel\tChina\nu2\tTravel\n";
        match load_str(text, InputFormat::Tsv) {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected malformed error, got {other:?}"),
        }
        let text = jsonl(&[("u1", "a", "b")]) + "{\"user\": \"u2\"}\n";
        match load_str(&text, InputFormat::Jsonl) {
            Err(Error::Malformed { line, reason }) => {
                assert_eq!(line, 2);
                assert!(reason.contains("collection"), "{reason}");
            }
            other => panic!("expected malformed error, got {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        let err =
            load_corpus(Path::new("/definitely/not/here.jsonl"), InputFormat::Jsonl).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn self_concatenation_is_idempotent() {
        let text = jsonl(&[
            ("u1", "Travel", "China"),
            ("u2", "Travel", "Japan"),
            ("u1", "Animals", "Birds"),
        ]);
        let once = load_str(&text, InputFormat::Jsonl).unwrap().0;
        let twice = load_str(&(text.clone() + &text), InputFormat::Jsonl)
            .unwrap()
            .0;
        assert_eq!(once, twice);
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(InputFormat::from_path(Path::new("x.TSV")), InputFormat::Tsv);
        assert_eq!(
            InputFormat::from_path(Path::new("x.jsonl")),
            InputFormat::Jsonl
        );
        assert!("xml".parse::<InputFormat>().is_err());
    }

    #[test]
    fn jsonl_writer_round_trips() {
        let c = Corpus::from_records([
            RawRecord::new("u1", "Travel", "China \"2005\""),
            RawRecord::new("u2", "Reisen", "Köln"),
        ]);
        let mut buf = Vec::new();
        c.write_jsonl(&mut buf).unwrap();
        let (back, _) = read_corpus(buf.as_slice(), InputFormat::Jsonl).unwrap();
        assert_eq!(back, c);
    }
}
