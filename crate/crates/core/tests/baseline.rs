mod common;

use std::collections::BTreeSet;

use folksonomy::baseline::{
    build_documents, count_cooccurrence, induce_baseline_hierarchy, BaselineConfig,
};
use folksonomy::{Corpus, NormalizerConfig, RawRecord};
use proptest::prelude::*;

use common::{brute_force_subsumption, raw_documents, Pair};

/// Ten bird records all filed under Animals, plus forty other animal records.
fn animal_bird_corpus() -> Corpus {
    let mut records: Vec<RawRecord> = (0..10)
        .map(|i| RawRecord::new(format!("b{i}"), "Animals", "Birds"))
        .collect();
    records.extend((0..40).map(|i| RawRecord::new(format!("a{i}"), "Animals", format!("Pet{i}"))));
    Corpus::from_records(records)
}

fn induced(corpus: &Corpus, threshold: f64) -> BTreeSet<Pair> {
    let norm = NormalizerConfig::default();
    let cfg = BaselineConfig {
        threshold,
        min_support: 2,
    };
    induce_baseline_hierarchy(&build_documents(corpus, &norm), &cfg)
        .unwrap()
        .into_iter()
        .map(|(b, n)| (b.to_string(), n.to_string()))
        .collect()
}

#[test]
fn nested_bird_documents_induce_animal_over_bird() {
    let corpus = animal_bird_corpus();
    let norm = NormalizerConfig::default();
    let stats = count_cooccurrence(&build_documents(&corpus, &norm));
    assert_eq!((stats.freq("anim"), stats.freq("bird")), (50, 10));
    let edge = ("anim".to_string(), "bird".to_string());
    for threshold in [0.8, 1.0] {
        let got = induced(&corpus, threshold);
        assert!(got.contains(&edge), "t={threshold}: {got:?}");
        assert_eq!(
            got,
            brute_force_subsumption(&raw_documents(&corpus, &norm), threshold, 2)
        );
    }
}

fn arb_corpus() -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((0u8..8, 0u8..8), 0..60)
}

fn corpus_from(pairs: &[(u8, u8)]) -> Corpus {
    const NAMES: [&str; 8] = [
        "Animal", "Bird", "Fish", "Travel", "China", "Japan", "Europe", "Music",
    ];
    Corpus::from_records(
        pairs.iter().enumerate().map(|(i, &(c, s))| {
            RawRecord::new(format!("u{i}"), NAMES[c as usize], NAMES[s as usize])
        }),
    )
}

proptest! {
    #[test]
    fn lowering_the_threshold_keeps_pairs_still_below_in_reverse(
        pairs in arb_corpus(),
        hi in 50u32..=100,
        drop in 1u32..=40,
    ) {
        let corpus = corpus_from(&pairs);
        let norm = NormalizerConfig::default();
        let docs = raw_documents(&corpus, &norm);
        let (hi, lo) = (hi as f64 / 100.0, (hi - drop.min(hi - 1)) as f64 / 100.0);
        let at_hi = induced(&corpus, hi);
        let at_lo = induced(&corpus, lo);
        prop_assert_eq!(&at_lo, &brute_force_subsumption(&docs, lo, 2));
        let freq = |t: &str| docs.iter().filter(|d| d.contains(t)).count() as f64;
        let co = |x: &str, y: &str| docs.iter().filter(|d| d.contains(x) && d.contains(y)).count() as f64;
        for (x, y) in &at_hi {
            if co(x, y) / freq(x) < lo {
                prop_assert!(at_lo.contains(&(x.clone(), y.clone())));
            }
        }
    }
}
