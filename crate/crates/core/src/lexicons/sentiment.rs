//! A subset of the VADER rule-based sentiment model.
//!
//! Implemented rules: lexicon valence sum, negation within the three
//! preceding tokens (scaled by −0.74 per negator), degree-adverb boosters in
//! the three preceding tokens (decaying by distance), and the compound
//! normalization `s / sqrt(s² + 15)`. Punctuation emphasis, capitalization,
//! contrastive "but" and idiom rules are not implemented.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::{parse_scored_terms, parse_terms};
use crate::{Error, Result};

const NEGATION_SCALAR: f64 = -0.74;
const NORMALIZATION_ALPHA: f64 = 15.0;
const BOOSTER_DECAY: [f64; 3] = [1.0, 0.95, 0.9];
const WINDOW: usize = 3;
pub const NEUTRAL_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SentimentLexicon {
    valence: BTreeMap<String, f64>,
    boosters: BTreeMap<String, f64>,
    negations: BTreeSet<String>,
}

impl SentimentLexicon {
    pub fn new(
        valence: BTreeMap<String, f64>,
        boosters: BTreeMap<String, f64>,
        negations: BTreeSet<String>,
    ) -> Result<Self> {
        if let Some((t, v)) = valence.iter().find(|(_, v)| !(-4.0..=4.0).contains(*v)) {
            return Err(Error::InvalidArgument(alloc::format!("valence of {t:?} is {v}, outside [-4, 4]")));
        }
        Ok(Self { valence, boosters, negations })
    }

    /// Parse the three lexicon files: valences and boosters as
    /// `term<TAB>value`, negations as one term per line.
    pub fn parse(valence: &str, boosters: &str, negations: &str) -> Result<Self> {
        Self::new(
            parse_scored_terms(valence)?.into_iter().collect(),
            parse_scored_terms(boosters)?.into_iter().collect(),
            parse_terms(negations).into_iter().collect(),
        )
    }

    pub fn valence(&self, token: &str) -> Option<f64> {
        self.valence.get(token).copied()
    }

    pub fn booster(&self, token: &str) -> Option<f64> {
        self.boosters.get(token).copied()
    }

    pub fn is_negation(&self, token: &str) -> bool {
        self.negations.contains(token) || token.contains("n't")
    }

    pub fn num_negations(&self) -> usize {
        self.negations.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentClass {
    Negative,
    Neutral,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentScore {
    pub compound: f64,
    pub class: SentimentClass,
}

impl SentimentClass {
    pub fn from_compound(compound: f64) -> Self {
        if compound >= NEUTRAL_THRESHOLD {
            SentimentClass::Positive
        } else if compound <= -NEUTRAL_THRESHOLD {
            SentimentClass::Negative
        } else {
            SentimentClass::Neutral
        }
    }
}

/// Compound valence in `[-1, 1]` and its three-way class.
pub fn sentiment_valence<S: AsRef<str>>(sentence: &[S], lexicon: &SentimentLexicon) -> SentimentScore {
    let lowered: alloc::vec::Vec<String> = sentence.iter().map(|t| t.as_ref().to_lowercase()).collect();
    let mut sum = 0.0;
    for (i, token) in lowered.iter().enumerate() {
        if lexicon.booster(token).is_some() {
            continue;
        }
        let Some(mut valence) = lexicon.valence(token) else { continue };
        for back in 1..=WINDOW.min(i) {
            let prev = &lowered[i - back];
            if lexicon.valence(prev).is_none() {
                if let Some(increment) = lexicon.booster(prev) {
                    let signed = if valence < 0.0 { -increment } else { increment };
                    valence += signed * BOOSTER_DECAY[back - 1];
                }
            }
        }
        for back in 1..=WINDOW.min(i) {
            if lexicon.is_negation(&lowered[i - back]) {
                valence *= NEGATION_SCALAR;
            }
        }
        sum += valence;
    }
    let compound = if sum == 0.0 { 0.0 } else { (sum / libm::sqrt(sum * sum + NORMALIZATION_ALPHA)).clamp(-1.0, 1.0) };
    SentimentScore { compound, class: SentimentClass::from_compound(compound) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lexicon() -> SentimentLexicon {
        SentimentLexicon::parse(
            "love\t3.2\nbeautiful\t2.9\ngood\t1.9\nhappy\t2.7\nsad\t-2.1\n",
            "very\t0.293\nslightly\t-0.293\n",
            "not\nnever\n",
        )
        .unwrap()
    }

    fn words(s: &str) -> alloc::vec::Vec<&str> {
        s.split(' ').collect()
    }

    #[test]
    fn empty_is_neutral_zero() {
        let score = sentiment_valence::<&str>(&[], &lexicon());
        assert_eq!(score, SentimentScore { compound: 0.0, class: SentimentClass::Neutral });
    }

    #[test]
    fn negation_flips_sign() {
        let score = sentiment_valence(&words("not good"), &lexicon());
        assert!(score.compound < 0.0);
        assert_eq!(score.class, SentimentClass::Negative);
        let contracted = sentiment_valence(&words("isn't good"), &lexicon());
        assert!(contracted.compound < 0.0);
    }

    #[test]
    fn boosters_follow_valence_sign() {
        let lex = lexicon();
        let plain = sentiment_valence(&words("happy"), &lex).compound;
        let boosted = sentiment_valence(&words("very happy"), &lex).compound;
        let damped = sentiment_valence(&words("slightly happy"), &lex).compound;
        assert!(boosted > plain && damped < plain);
        let sad = sentiment_valence(&words("sad"), &lex).compound;
        let very_sad = sentiment_valence(&words("very sad"), &lex).compound;
        assert!(very_sad < sad);
    }

    #[test]
    fn class_thresholds() {
        assert_eq!(SentimentClass::from_compound(0.05), SentimentClass::Positive);
        assert_eq!(SentimentClass::from_compound(0.0499), SentimentClass::Neutral);
        assert_eq!(SentimentClass::from_compound(-0.05), SentimentClass::Negative);
    }

    #[test]
    fn rejects_out_of_range_valence() {
        assert!(SentimentLexicon::parse("x\t5\n", "", "").is_err());
    }
}
