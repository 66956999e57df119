use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{parse_scored_terms, Histogram};
use crate::corpus::AnnotationCorpus;
use crate::{Error, Result};

/// Lemma-keyed concreteness ratings in `[1, 5]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConcretenessLexicon {
    scores: BTreeMap<String, f64>,
}

impl ConcretenessLexicon {
    pub fn from_entries(entries: impl IntoIterator<Item = (String, f64)>) -> Result<Self> {
        let mut scores = BTreeMap::new();
        for (term, score) in entries {
            if !(1.0..=5.0).contains(&score) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "concreteness of {term:?} is {score}, outside [1, 5]"
                )));
            }
            scores.insert(term.to_lowercase(), score);
        }
        Ok(Self { scores })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_entries(parse_scored_terms(text)?)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Exact lookup first, then the token with a trailing `s` and then `es`
    /// removed.
    pub fn score(&self, token: &str) -> Option<f64> {
        let token = token.to_lowercase();
        if let Some(&s) = self.scores.get(&token) {
            return Some(s);
        }
        for suffix in ["s", "es"] {
            if let Some(stem) = token.strip_suffix(suffix) {
                if !stem.is_empty() {
                    if let Some(&s) = self.scores.get(stem) {
                        return Some(s);
                    }
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcretenessSummary {
    /// Mean over covered token occurrences.
    pub mean: f64,
    pub covered_tokens: u64,
    pub total_tokens: u64,
    pub coverage: f64,
    /// Occurrence scores binned over `[1, 5]` in steps of 0.25.
    pub histogram: Histogram,
}

pub fn corpus_concreteness(corpus: &AnnotationCorpus, lexicon: &ConcretenessLexicon) -> Result<ConcretenessSummary> {
    let mut histogram = Histogram::new(1.0, 5.0, 0.25);
    let (mut sum, mut covered, mut total) = (0.0, 0u64, 0u64);
    let scores: Vec<f64> = corpus
        .records()
        .iter()
        .flat_map(|r| r.tokens.iter())
        .filter_map(|t| {
            total += 1;
            lexicon.score(t)
        })
        .collect();
    for s in scores {
        sum += s;
        covered += 1;
        histogram.add(s);
    }
    if covered == 0 {
        return Err(Error::Empty("tokens covered by the concreteness lexicon"));
    }
    Ok(ConcretenessSummary {
        mean: sum / covered as f64,
        covered_tokens: covered,
        total_tokens: total,
        coverage: covered as f64 / total as f64,
        histogram,
    })
}
