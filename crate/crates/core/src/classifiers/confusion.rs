use alloc::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::probe::ImageEmotionProbe;
use super::EmotionPredictor;
use crate::analysis::{majority_stats, strong_majority_labels, MajorityRule};
use crate::corpus::{AnnotationCorpus, EmbeddingTable};
use crate::emotion::{EmotionLabel, NUM_EMOTIONS};
use crate::{EmotionDistribution, Error, Result, Sentiment};

/// Rows are true labels, columns predicted labels.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; NUM_EMOTIONS]; NUM_EMOTIONS],
}

impl ConfusionMatrix {
    pub fn add(&mut self, truth: EmotionLabel, predicted: EmotionLabel) {
        self.counts[truth.index()][predicted.index()] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..NUM_EMOTIONS).map(|i| self.counts[i][i]).sum()
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.correct() as f64 / total as f64
        }
    }

    pub fn support(&self, label: EmotionLabel) -> u64 {
        self.counts[label.index()].iter().sum()
    }

    /// `None` when the label was never predicted.
    pub fn precision(&self, label: EmotionLabel) -> Option<f64> {
        let i = label.index();
        let predicted: u64 = self.counts.iter().map(|row| row[i]).sum();
        (predicted > 0).then(|| self.counts[i][i] as f64 / predicted as f64)
    }

    /// `None` when the label never occurs.
    pub fn recall(&self, label: EmotionLabel) -> Option<f64> {
        let support = self.support(label);
        (support > 0).then(|| self.counts[label.index()][label.index()] as f64 / support as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub confusion: ConfusionMatrix,
    pub per_label_recall: BTreeMap<EmotionLabel, Option<f64>>,
    pub accuracy: f64,
    /// Examples whose true label has a valence.
    pub binary_total: u64,
    pub binary_correct: u64,
    pub binary_accuracy: f64,
    /// Images left out because the top labels tie.
    pub excluded_ties: usize,
}

#[derive(Default)]
struct Tally {
    confusion: ConfusionMatrix,
    binary_total: u64,
    binary_correct: u64,
}

impl Tally {
    fn add(&mut self, truth: EmotionLabel, prediction: &EmotionDistribution) {
        self.confusion.add(truth, prediction.argmax());
        let expected = truth.sentiment();
        if expected != Sentiment::Excluded {
            self.binary_total += 1;
            if prediction.sentiment() == expected {
                self.binary_correct += 1;
            }
        }
    }

    fn finish(self, excluded_ties: usize) -> Evaluation {
        let binary_accuracy =
            if self.binary_total == 0 { 0.0 } else { self.binary_correct as f64 / self.binary_total as f64 };
        Evaluation {
            per_label_recall: EmotionLabel::ALL.iter().map(|&l| (l, self.confusion.recall(l))).collect(),
            accuracy: self.confusion.accuracy(),
            confusion: self.confusion,
            binary_total: self.binary_total,
            binary_correct: self.binary_correct,
            binary_accuracy,
            excluded_ties,
        }
    }
}

/// Score a text classifier on every record of the corpus.
pub fn evaluate_text_classifier(model: &impl EmotionPredictor, corpus: &AnnotationCorpus) -> Result<Evaluation> {
    if corpus.is_empty() {
        return Err(Error::Empty("evaluation corpus"));
    }
    let mut tally = Tally::default();
    for r in corpus.records() {
        tally.add(r.emotion, &model.predict_tokens(&r.tokens));
    }
    Ok(tally.finish(0))
}

/// Score an image probe on images with a unique strong-majority label.
pub fn evaluate_image_probe(
    probe: &ImageEmotionProbe,
    embeddings: &EmbeddingTable,
    corpus: &AnnotationCorpus,
    rule: MajorityRule,
) -> Result<Evaluation> {
    if embeddings.space_tag() != probe.space_tag() {
        return Err(Error::SpaceMismatch { expected: probe.space_tag().into(), found: embeddings.space_tag().into() });
    }
    let stats = majority_stats(corpus, rule)?;
    let labels = strong_majority_labels(corpus, rule);
    if labels.is_empty() {
        return Err(Error::Empty("images with a unique strong majority"));
    }
    let mut tally = Tally::default();
    for (id, &truth) in &labels {
        tally.add(truth, &probe.predict(embeddings.require(id)?)?);
    }
    Ok(tally.finish(stats.tied_majority_images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use EmotionLabel::*;

    struct Fixed(EmotionDistribution);

    impl EmotionPredictor for Fixed {
        fn predict_tokens(&self, _: &[String]) -> EmotionDistribution {
            self.0
        }
    }

    #[test]
    fn matrix_counts() {
        let mut m = ConfusionMatrix::default();
        m.add(Awe, Awe);
        m.add(Awe, Fear);
        m.add(Fear, Fear);
        assert_eq!(m.total(), 3);
        assert!((m.accuracy() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(m.precision(Fear), Some(0.5));
        assert_eq!(m.recall(Awe), Some(0.5));
        assert_eq!(m.recall(Anger), None);
    }

    #[test]
    fn binary_scoring_skips_something_else_truth() {
        use crate::corpus::fixtures::record;
        let corpus = AnnotationCorpus::new(alloc::vec![
            record("a", Awe, "one two three"),
            record("b", SomethingElse, "one two three"),
            record("c", Fear, "one two three"),
        ])
        .unwrap();
        let eval = evaluate_text_classifier(&Fixed(EmotionDistribution::one_hot(SomethingElse)), &corpus).unwrap();
        assert_eq!(eval.binary_total, 2);
        assert_eq!(eval.accuracy, 1.0 / 3.0);
        // something-else prediction falls back to the most probable valenced label (amusement).
        assert_eq!(eval.binary_correct, 1);
    }
}
