//! The nine-way emotion taxonomy and distributions over it.

use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Number of labels in the taxonomy (eight emotions plus something-else).
pub const NUM_EMOTIONS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmotionLabel {
    Amusement,
    Awe,
    Contentment,
    Excitement,
    Anger,
    Disgust,
    Fear,
    Sadness,
    SomethingElse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Valence {
    Positive,
    Negative,
}

/// Outcome of collapsing an emotion onto its valence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sentiment {
    Positive,
    Negative,
    /// something-else carries no valence and is left out of binary scoring.
    Excluded,
}

impl EmotionLabel {
    /// All labels in canonical order; the index of a label in this array is
    /// its [`EmotionLabel::index`].
    pub const ALL: [EmotionLabel; NUM_EMOTIONS] = [
        EmotionLabel::Amusement,
        EmotionLabel::Awe,
        EmotionLabel::Contentment,
        EmotionLabel::Excitement,
        EmotionLabel::Anger,
        EmotionLabel::Disgust,
        EmotionLabel::Fear,
        EmotionLabel::Sadness,
        EmotionLabel::SomethingElse,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Amusement => "amusement",
            EmotionLabel::Awe => "awe",
            EmotionLabel::Contentment => "contentment",
            EmotionLabel::Excitement => "excitement",
            EmotionLabel::Anger => "anger",
            EmotionLabel::Disgust => "disgust",
            EmotionLabel::Fear => "fear",
            EmotionLabel::Sadness => "sadness",
            EmotionLabel::SomethingElse => "something-else",
        }
    }

    pub fn valence(self) -> Option<Valence> {
        use EmotionLabel::*;
        match self {
            Amusement | Awe | Contentment | Excitement => Some(Valence::Positive),
            Anger | Disgust | Fear | Sadness => Some(Valence::Negative),
            SomethingElse => None,
        }
    }

    pub fn sentiment(self) -> Sentiment {
        match self.valence() {
            Some(Valence::Positive) => Sentiment::Positive,
            Some(Valence::Negative) => Sentiment::Negative,
            None => Sentiment::Excluded,
        }
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EmotionLabel {
    type Err = Error;

    /// Case-insensitive; `something else` and `something_else` are accepted
    /// spellings of `something-else`.
    fn from_str(s: &str) -> Result<Self> {
        let lowered = s.trim().to_lowercase().replace(['_', ' '], "-");
        EmotionLabel::ALL
            .iter()
            .copied()
            .find(|label| label.as_str() == lowered)
            .ok_or_else(|| Error::UnknownEmotion(s.to_string()))
    }
}

/// Probability vector over the nine labels, indexed by [`EmotionLabel::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionDistribution([f64; NUM_EMOTIONS]);

impl EmotionDistribution {
    pub const TOLERANCE: f64 = 1e-6;

    pub fn new(probs: [f64; NUM_EMOTIONS]) -> Result<Self> {
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidArgument("distribution entries must be finite and nonnegative".to_string()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::InvalidArgument(alloc::format!("distribution sums to {total}, not 1")));
        }
        Ok(Self(probs))
    }

    pub fn uniform() -> Self {
        Self([1.0 / NUM_EMOTIONS as f64; NUM_EMOTIONS])
    }

    pub fn one_hot(label: EmotionLabel) -> Self {
        let mut probs = [0.0; NUM_EMOTIONS];
        probs[label.index()] = 1.0;
        Self(probs)
    }

    /// Normalized label counts; fails when every count is zero.
    pub fn from_counts(counts: &[u64; NUM_EMOTIONS]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Empty("label counts"));
        }
        let mut probs = [0.0; NUM_EMOTIONS];
        for (p, &c) in probs.iter_mut().zip(counts) {
            *p = c as f64 / total as f64;
        }
        Ok(Self(probs))
    }

    /// Softmax of raw scores. Always yields a valid distribution for finite input.
    pub fn from_logits(logits: &[f64; NUM_EMOTIONS]) -> Self {
        let mut probs = *logits;
        crate::vector::softmax_in_place(&mut probs);
        Self(probs)
    }

    pub fn probs(&self) -> &[f64; NUM_EMOTIONS] {
        &self.0
    }

    pub fn prob(&self, label: EmotionLabel) -> f64 {
        self.0[label.index()]
    }

    /// Most likely label; ties resolve to the label that comes first in
    /// [`EmotionLabel::ALL`].
    pub fn argmax(&self) -> EmotionLabel {
        argmax_over(&self.0, &EmotionLabel::ALL)
    }

    /// Most likely label among the eight valenced ones.
    pub fn argmax_valenced(&self) -> EmotionLabel {
        argmax_over(&self.0, &EmotionLabel::ALL[..8])
    }

    pub fn sentiment(&self) -> Sentiment {
        self.argmax_valenced().sentiment()
    }
}

fn argmax_over(probs: &[f64; NUM_EMOTIONS], labels: &[EmotionLabel]) -> EmotionLabel {
    let mut best = labels[0];
    for &label in &labels[1..] {
        if probs[label.index()] > probs[best.index()] {
            best = label;
        }
    }
    best
}

/// Collapse a label onto its valence.
pub fn binarize_label(label: EmotionLabel) -> Sentiment {
    label.sentiment()
}

/// Collapse a predicted distribution onto a valence by taking the argmax
/// over the eight valenced labels.
pub fn binarize_distribution(dist: &EmotionDistribution) -> Sentiment {
    dist.sentiment()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_labels_and_rejects_others() {
        for label in EmotionLabel::ALL {
            assert_eq!(label.as_str().parse::<EmotionLabel>().unwrap(), label);
        }
        assert_eq!("Something Else".parse::<EmotionLabel>().unwrap(), EmotionLabel::SomethingElse);
        assert_eq!("joy".parse::<EmotionLabel>(), Err(Error::UnknownEmotion("joy".into())));
    }

    #[test]
    fn valence_partition() {
        assert_eq!(binarize_label(EmotionLabel::Fear), Sentiment::Negative);
        assert_eq!(binarize_label(EmotionLabel::Awe), Sentiment::Positive);
        assert_eq!(binarize_label(EmotionLabel::SomethingElse), Sentiment::Excluded);
        let positives = EmotionLabel::ALL.iter().filter(|l| l.valence() == Some(Valence::Positive)).count();
        assert_eq!(positives, 4);
    }

    #[test]
    fn distribution_binarization_skips_something_else() {
        let mut probs = [0.0; NUM_EMOTIONS];
        probs[EmotionLabel::SomethingElse.index()] = 0.6;
        probs[EmotionLabel::Sadness.index()] = 0.3;
        probs[EmotionLabel::Awe.index()] = 0.1;
        let dist = EmotionDistribution::new(probs).unwrap();
        assert_eq!(dist.argmax(), EmotionLabel::SomethingElse);
        assert_eq!(binarize_distribution(&dist), Sentiment::Negative);
    }

    #[test]
    fn rejects_invalid_distributions() {
        assert!(EmotionDistribution::new([0.5; NUM_EMOTIONS]).is_err());
        let mut probs = [0.0; NUM_EMOTIONS];
        probs[0] = -0.5;
        probs[1] = 1.5;
        assert!(EmotionDistribution::new(probs).is_err());
        assert!(EmotionDistribution::from_counts(&[0; NUM_EMOTIONS]).is_err());
    }
}
