use aec_core::lexicons::{sentiment_valence, SentimentClass, SentimentLexicon};
use aec_core::text::tokenize;

fn bundled() -> SentimentLexicon {
    SentimentLexicon::parse(
        include_str!("../../../data/sentiment_valence.tsv"),
        include_str!("../../../data/sentiment_boosters.tsv"),
        include_str!("../../../data/sentiment_negations.tsv"),
    )
    .unwrap()
}

fn reference() -> Vec<(String, f64)> {
    include_str!("fixtures/vader_reference.tsv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let (s, v) = l.rsplit_once('\t').unwrap();
            (s.to_string(), v.parse().unwrap())
        })
        .collect()
}

fn class(compound: f64) -> SentimentClass {
    if compound >= 0.05 {
        SentimentClass::Positive
    } else if compound <= -0.05 {
        SentimentClass::Negative
    } else {
        SentimentClass::Neutral
    }
}

/// Sentences whose reference score uses only lexicon sums, boosters and
/// negation agree to the printed precision.
#[test]
fn matches_reference_on_supported_rules() {
    let lex = bundled();
    let table = reference();
    for sentence in [
        "not good",
        "the dog is very happy",
        "this is not a happy place",
        "i feel sad and lonely",
        "the car is red",
        "it is extremely ugly and disgusting",
        "what a wonderful day",
    ] {
        let expected = table.iter().find(|(s, _)| s == sentence).unwrap().1;
        let got = sentiment_valence(&tokenize(sentence), &lex).compound;
        assert!((got - expected).abs() < 5e-5, "{sentence}: {got} vs {expected}");
    }
}

/// Over the whole reference set the subset stays close to the full rule set.
#[test]
fn divergence_from_reference_is_bounded() {
    let lex = bundled();
    let table = reference();
    let mut max_abs: f64 = 0.0;
    let mut total_abs = 0.0;
    let mut agree = 0;
    for (sentence, expected) in &table {
        let got = sentiment_valence(&tokenize(sentence), &lex);
        let d = (got.compound - expected).abs();
        if d > 5e-5 {
            println!("diverges: {sentence:?} {:.4} vs {expected}", got.compound);
        }
        max_abs = max_abs.max(d);
        total_abs += d;
        agree += (got.class == class(*expected)) as usize;
    }
    let mean_abs = total_abs / table.len() as f64;
    println!("sentences {} mean |d| {mean_abs:.4} max |d| {max_abs:.4} class agreement {agree}", table.len());
    assert!(mean_abs < 0.05);
    assert!(agree as f64 / table.len() as f64 >= 0.9);
}

#[test]
fn classes_follow_threshold() {
    let lex = bundled();
    assert_eq!(sentiment_valence(&tokenize("the car is red"), &lex).class, SentimentClass::Neutral);
    assert_eq!(sentiment_valence(&tokenize("not good"), &lex).class, SentimentClass::Negative);
    assert_eq!(sentiment_valence(&tokenize("what a wonderful day"), &lex).class, SentimentClass::Positive);
}
