use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{batches, EmotionPredictor, NgramFeatures, TrainReport};
use crate::corpus::AnnotationCorpus;
use crate::emotion::NUM_EMOTIONS;
use crate::vector::{log_softmax_in_place, softmax_in_place};
use crate::{EmotionDistribution, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextHyper {
    pub learning_rate: f64,
    pub epochs: usize,
    /// 0 means full batch.
    pub batch_size: usize,
    pub l2: f64,
    pub seed: u64,
    /// Weight examples by inverse class frequency.
    pub class_weighting: bool,
    /// Minimum document frequency for an n-gram to become a feature.
    pub min_feature_count: usize,
}

impl Default for TextHyper {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            epochs: 30,
            batch_size: 32,
            l2: 1e-5,
            seed: 0,
            class_weighting: false,
            min_feature_count: 1,
        }
    }
}

/// Multinomial logistic regression over binary bag-of-1,2-gram features.
///
/// Weights are a 9 × (features + 1) row-major matrix; the last column of
/// each row is the bias.
#[derive(Debug, Clone, PartialEq)]
pub struct TextEmotionClassifier {
    features: NgramFeatures,
    weights: Vec<f64>,
    hyper: TextHyper,
}

impl TextEmotionClassifier {
    pub fn zeroed(features: NgramFeatures, hyper: TextHyper) -> Self {
        let weights = vec![0.0; NUM_EMOTIONS * (features.len() + 1)];
        Self { features, weights, hyper }
    }

    pub fn from_parts(features: NgramFeatures, weights: Vec<f64>, hyper: TextHyper) -> Result<Self> {
        let expected = NUM_EMOTIONS * (features.len() + 1);
        if weights.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: weights.len() });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite(String::from("text classifier weights")));
        }
        Ok(Self { features, weights, hyper })
    }

    pub fn features(&self) -> &NgramFeatures {
        &self.features
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn hyper(&self) -> &TextHyper {
        &self.hyper
    }

    pub fn predict<S: AsRef<str>>(&self, tokens: &[S]) -> EmotionDistribution {
        let active = self.features.extract(tokens);
        let mut logits = [0.0; NUM_EMOTIONS];
        linear_scores(&self.weights, self.features.len(), &active, &mut logits);
        EmotionDistribution::from_logits(&logits)
    }
}

impl EmotionPredictor for TextEmotionClassifier {
    fn predict_tokens(&self, tokens: &[String]) -> EmotionDistribution {
        self.predict(tokens)
    }
}

pub fn predict_emotion<S: AsRef<str>>(clf: &TextEmotionClassifier, tokens: &[S]) -> EmotionDistribution {
    clf.predict(tokens)
}

fn linear_scores(weights: &[f64], num_features: usize, active: &[u32], out: &mut [f64; NUM_EMOTIONS]) {
    let stride = num_features + 1;
    for (c, score) in out.iter_mut().enumerate() {
        let row = &weights[c * stride..(c + 1) * stride];
        *score = row[num_features] + active.iter().map(|&f| row[f as usize]).sum::<f64>();
    }
}

struct Example {
    active: Vec<u32>,
    label: usize,
    weight: f64,
}

/// Weighted mean cross-entropy plus `l2 / 2 · ‖W‖²` (bias excluded).
pub struct TextObjective {
    examples: Vec<Example>,
    num_features: usize,
    l2: f64,
}

impl TextObjective {
    pub fn new<S: AsRef<str>>(
        features: &NgramFeatures,
        data: &[(&[S], crate::EmotionLabel)],
        l2: f64,
        class_weighting: bool,
    ) -> Self {
        let mut counts = [0usize; NUM_EMOTIONS];
        for (_, label) in data {
            counts[label.index()] += 1;
        }
        let present = counts.iter().filter(|&&c| c > 0).count().max(1);
        let examples = data
            .iter()
            .map(|(tokens, label)| Example {
                active: features.extract(tokens),
                label: label.index(),
                weight: if class_weighting {
                    data.len() as f64 / (present as f64 * counts[label.index()] as f64)
                } else {
                    1.0
                },
            })
            .collect();
        Self { examples, num_features: features.len(), l2 }
    }

    pub fn num_params(&self) -> usize {
        NUM_EMOTIONS * (self.num_features + 1)
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn loss(&self, weights: &[f64]) -> f64 {
        let all: Vec<usize> = (0..self.examples.len()).collect();
        self.loss_on(weights, &all)
    }

    pub fn gradient(&self, weights: &[f64]) -> Vec<f64> {
        let all: Vec<usize> = (0..self.examples.len()).collect();
        let mut grad = vec![0.0; weights.len()];
        self.gradient_on(weights, &all, &mut grad);
        grad
    }

    pub fn loss_on(&self, weights: &[f64], batch: &[usize]) -> f64 {
        let mut logits = [0.0; NUM_EMOTIONS];
        let (mut total, mut mass) = (0.0, 0.0);
        for &i in batch {
            let ex = &self.examples[i];
            linear_scores(weights, self.num_features, &ex.active, &mut logits);
            log_softmax_in_place(&mut logits);
            total -= ex.weight * logits[ex.label];
            mass += ex.weight;
        }
        total / mass + 0.5 * self.l2 * self.penalty(weights)
    }

    pub fn gradient_on(&self, weights: &[f64], batch: &[usize], grad: &mut [f64]) {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let stride = self.num_features + 1;
        let mass: f64 = batch.iter().map(|&i| self.examples[i].weight).sum();
        let mut probs = [0.0; NUM_EMOTIONS];
        for &i in batch {
            let ex = &self.examples[i];
            linear_scores(weights, self.num_features, &ex.active, &mut probs);
            softmax_in_place(&mut probs);
            probs[ex.label] -= 1.0;
            for (c, &p) in probs.iter().enumerate() {
                let g = ex.weight * p / mass;
                let row = &mut grad[c * stride..(c + 1) * stride];
                row[self.num_features] += g;
                for &f in &ex.active {
                    row[f as usize] += g;
                }
            }
        }
        if self.l2 > 0.0 {
            for c in 0..NUM_EMOTIONS {
                for f in 0..self.num_features {
                    grad[c * stride + f] += self.l2 * weights[c * stride + f];
                }
            }
        }
    }

    fn penalty(&self, weights: &[f64]) -> f64 {
        if self.l2 == 0.0 {
            return 0.0;
        }
        let stride = self.num_features + 1;
        weights.iter().enumerate().filter(|(i, _)| i % stride != self.num_features).map(|(_, w)| w * w).sum()
    }
}

/// Fit the text classifier on every record of `train`. Deterministic for a
/// fixed `hyper.seed`.
pub fn train_text_emotion(train: &AnnotationCorpus, hyper: TextHyper) -> Result<(TextEmotionClassifier, TrainReport)> {
    if train.is_empty() {
        return Err(Error::Empty("training corpus"));
    }
    if !(hyper.learning_rate > 0.0) || hyper.l2 < 0.0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "learning rate must be > 0 and l2 >= 0 (got {}, {})",
            hyper.learning_rate,
            hyper.l2
        )));
    }
    let docs = train.records().iter().map(|r| r.tokens.as_slice());
    let features = NgramFeatures::build(docs, hyper.min_feature_count);
    let data: Vec<(&[String], crate::EmotionLabel)> =
        train.records().iter().map(|r| (r.tokens.as_slice(), r.emotion)).collect();
    let objective = TextObjective::new(&features, &data, hyper.l2, hyper.class_weighting);
    let degenerate = data.iter().all(|(_, l)| *l == data[0].1);

    let mut clf = TextEmotionClassifier::zeroed(features, hyper);
    let mut grad = vec![0.0; clf.weights.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut history = Vec::with_capacity(hyper.epochs + 1);
    history.push(objective.loss(&clf.weights));
    for _ in 0..hyper.epochs {
        for batch in batches(objective.len(), hyper.batch_size, &mut rng) {
            objective.gradient_on(&clf.weights, &batch, &mut grad);
            for (w, g) in clf.weights.iter_mut().zip(&grad) {
                *w -= hyper.learning_rate * g;
            }
        }
        history.push(objective.loss(&clf.weights));
    }
    let report = TrainReport {
        final_loss: *history.last().expect("initial loss recorded"),
        loss_history: history,
        examples: objective.len(),
        degenerate,
    };
    Ok((clf, report))
}
