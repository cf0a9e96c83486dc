use folksonomy::normalize::stem;

const VOCABULARY: &str = include_str!("data/porter_voc.txt");
const EXPECTED: &str = include_str!("data/porter_output.txt");

#[test]
fn reproduces_published_vocabulary() {
    let words: Vec<&str> = VOCABULARY.lines().collect();
    let expected: Vec<&str> = EXPECTED.lines().collect();
    assert_eq!(words.len(), 23_532);
    assert_eq!(words.len(), expected.len());
    let diff: Vec<String> = words
        .iter()
        .zip(&expected)
        .filter_map(|(w, e)| {
            let got = stem(w);
            (got != *e).then(|| format!("{w}: got {got}, expected {e}"))
        })
        .collect();
    assert!(
        diff.is_empty(),
        "{} mismatches, first: {:?}",
        diff.len(),
        &diff[..diff.len().min(20)]
    );
}
