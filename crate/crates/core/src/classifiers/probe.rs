use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{batches, TrainReport};
use crate::corpus::{AnnotationCorpus, EmbeddingTable};
use crate::emotion::NUM_EMOTIONS;
use crate::vector::{log_softmax_in_place, softmax_in_place};
use crate::{EmotionDistribution, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeHyper {
    pub learning_rate: f64,
    pub epochs: usize,
    /// 0 means full batch.
    pub batch_size: usize,
    pub l2: f64,
    pub seed: u64,
}

impl Default for ProbeHyper {
    fn default() -> Self {
        Self { learning_rate: 0.5, epochs: 200, batch_size: 0, l2: 0.0, seed: 0 }
    }
}

/// Softmax-linear map from image embeddings to emotion distributions.
/// Weights are 9 × (dim + 1), row-major, bias last.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageEmotionProbe {
    space_tag: String,
    dim: usize,
    weights: Vec<f64>,
    hyper: ProbeHyper,
}

impl ImageEmotionProbe {
    pub fn zeroed(space_tag: impl Into<String>, dim: usize, hyper: ProbeHyper) -> Self {
        Self { space_tag: space_tag.into(), dim, weights: vec![0.0; NUM_EMOTIONS * (dim + 1)], hyper }
    }

    pub fn from_parts(space_tag: impl Into<String>, dim: usize, weights: Vec<f64>, hyper: ProbeHyper) -> Result<Self> {
        let expected = NUM_EMOTIONS * (dim + 1);
        if weights.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: weights.len() });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite(String::from("image probe weights")));
        }
        Ok(Self { space_tag: space_tag.into(), dim, weights, hyper })
    }

    pub fn space_tag(&self) -> &str {
        &self.space_tag
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn hyper(&self) -> &ProbeHyper {
        &self.hyper
    }

    /// Linear scores before the softmax.
    pub fn scores(&self, embedding: &[f32]) -> Result<[f64; NUM_EMOTIONS]> {
        if embedding.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: embedding.len() });
        }
        let x: Vec<f64> = embedding.iter().map(|&v| v as f64).collect();
        let mut out = [0.0; NUM_EMOTIONS];
        dense_scores(&self.weights, &x, &mut out);
        Ok(out)
    }

    pub fn predict(&self, embedding: &[f32]) -> Result<EmotionDistribution> {
        Ok(EmotionDistribution::from_logits(&self.scores(embedding)?))
    }
}

/// Predict for an embedding from the named space.
pub fn predict_image_emotion(
    probe: &ImageEmotionProbe,
    embedding: &[f32],
    space_tag: &str,
) -> Result<EmotionDistribution> {
    if space_tag != probe.space_tag {
        return Err(Error::SpaceMismatch { expected: probe.space_tag.clone(), found: String::from(space_tag) });
    }
    probe.predict(embedding)
}

fn dense_scores(weights: &[f64], x: &[f64], out: &mut [f64; NUM_EMOTIONS]) {
    let stride = x.len() + 1;
    for (c, score) in out.iter_mut().enumerate() {
        let row = &weights[c * stride..(c + 1) * stride];
        *score = row[x.len()] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
    }
}

/// Mean `KL(target ‖ softmax(W x))` plus `l2 / 2 · ‖W‖²` (bias excluded).
pub struct ProbeObjective {
    inputs: Vec<f64>,
    targets: Vec<[f64; NUM_EMOTIONS]>,
    dim: usize,
    l2: f64,
}

impl ProbeObjective {
    pub fn new(inputs: Vec<f64>, targets: Vec<EmotionDistribution>, dim: usize, l2: f64) -> Result<Self> {
        if inputs.len() != targets.len() * dim {
            return Err(Error::DimensionMismatch { expected: targets.len() * dim, found: inputs.len() });
        }
        Ok(Self { inputs, targets: targets.iter().map(|t| *t.probs()).collect(), dim, l2 })
    }

    pub fn num_params(&self) -> usize {
        NUM_EMOTIONS * (self.dim + 1)
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    fn input(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn loss(&self, weights: &[f64]) -> f64 {
        let all: Vec<usize> = (0..self.len()).collect();
        self.loss_on(weights, &all)
    }

    pub fn gradient(&self, weights: &[f64]) -> Vec<f64> {
        let all: Vec<usize> = (0..self.len()).collect();
        let mut grad = vec![0.0; weights.len()];
        self.gradient_on(weights, &all, &mut grad);
        grad
    }

    pub fn loss_on(&self, weights: &[f64], batch: &[usize]) -> f64 {
        let mut logp = [0.0; NUM_EMOTIONS];
        let mut total = 0.0;
        for &i in batch {
            dense_scores(weights, self.input(i), &mut logp);
            log_softmax_in_place(&mut logp);
            total += self.targets[i]
                .iter()
                .zip(&logp)
                .filter(|(&t, _)| t > 0.0)
                .map(|(&t, &lp)| t * (libm::log(t) - lp))
                .sum::<f64>();
        }
        total / batch.len() as f64 + 0.5 * self.l2 * self.penalty(weights)
    }

    pub fn gradient_on(&self, weights: &[f64], batch: &[usize], grad: &mut [f64]) {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let stride = self.dim + 1;
        let n = batch.len() as f64;
        let mut probs = [0.0; NUM_EMOTIONS];
        for &i in batch {
            let x = self.input(i);
            dense_scores(weights, x, &mut probs);
            softmax_in_place(&mut probs);
            for c in 0..NUM_EMOTIONS {
                let g = (probs[c] - self.targets[i][c]) / n;
                let row = &mut grad[c * stride..(c + 1) * stride];
                for (r, v) in row.iter_mut().zip(x) {
                    *r += g * v;
                }
                row[self.dim] += g;
            }
        }
        if self.l2 > 0.0 {
            for c in 0..NUM_EMOTIONS {
                for f in 0..self.dim {
                    grad[c * stride + f] += self.l2 * weights[c * stride + f];
                }
            }
        }
    }

    fn penalty(&self, weights: &[f64]) -> f64 {
        if self.l2 == 0.0 {
            return 0.0;
        }
        let stride = self.dim + 1;
        weights.iter().enumerate().filter(|(i, _)| i % stride != self.dim).map(|(_, w)| w * w).sum()
    }
}

/// Per-image empirical emotion distributions (normalized label counts).
pub fn empirical_targets(corpus: &AnnotationCorpus) -> BTreeMap<String, EmotionDistribution> {
    corpus
        .images()
        .map(|(id, records)| {
            let mut counts = [0u64; NUM_EMOTIONS];
            for r in records {
                counts[r.emotion.index()] += 1;
            }
            (String::from(id), EmotionDistribution::from_counts(&counts).expect("images have records"))
        })
        .collect()
}

/// Fit the probe on every target id. Each id must have an embedding.
pub fn train_image_probe(
    embeddings: &EmbeddingTable,
    targets: &BTreeMap<String, EmotionDistribution>,
    hyper: ProbeHyper,
) -> Result<(ImageEmotionProbe, TrainReport)> {
    if targets.is_empty() {
        return Err(Error::Empty("probe targets"));
    }
    if !(hyper.learning_rate > 0.0) || hyper.l2 < 0.0 {
        return Err(Error::InvalidArgument(String::from("learning rate must be > 0 and l2 >= 0")));
    }
    let dim = embeddings.dim();
    let mut inputs = Vec::with_capacity(targets.len() * dim);
    for id in targets.keys() {
        inputs.extend(embeddings.require(id)?.iter().map(|&v| v as f64));
    }
    let degenerate = {
        let first = targets.values().next().expect("nonempty").argmax();
        targets.values().all(|t| t.argmax() == first)
    };
    let objective = ProbeObjective::new(inputs, targets.values().copied().collect(), dim, hyper.l2)?;
    let mut probe = ImageEmotionProbe::zeroed(embeddings.space_tag(), dim, hyper);
    let mut grad = vec![0.0; probe.weights.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut history = Vec::with_capacity(hyper.epochs + 1);
    history.push(objective.loss(&probe.weights));
    for _ in 0..hyper.epochs {
        for batch in batches(objective.len(), hyper.batch_size, &mut rng) {
            objective.gradient_on(&probe.weights, &batch, &mut grad);
            for (w, g) in probe.weights.iter_mut().zip(&grad) {
                *w -= hyper.learning_rate * g;
            }
        }
        history.push(objective.loss(&probe.weights));
    }
    let report = TrainReport {
        final_loss: *history.last().expect("initial loss recorded"),
        loss_history: history,
        examples: objective.len(),
        degenerate,
    };
    Ok((probe, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> EmbeddingTable {
        EmbeddingTable::new("resnet", 2, vec!["a".into(), "b".into()], vec![1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn uniform_targets_have_zero_initial_kl() {
        let targets: BTreeMap<String, EmotionDistribution> =
            [("a".into(), EmotionDistribution::uniform()), ("b".into(), EmotionDistribution::uniform())].into();
        let (probe, report) =
            train_image_probe(&table(), &targets, ProbeHyper { epochs: 3, ..Default::default() }).unwrap();
        assert!(report.loss_history[0].abs() < 1e-12);
        assert!(report.loss_history.iter().all(|&l| l >= -1e-12));
        let d = probe.predict(&[0.3, -0.2]).unwrap();
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_probe_is_uniform_and_checks_space() {
        let probe = ImageEmotionProbe::zeroed("resnet", 2, ProbeHyper::default());
        let d = predict_image_emotion(&probe, &[0.0, 0.0], "resnet").unwrap();
        assert_eq!(d, EmotionDistribution::uniform());
        assert!(matches!(predict_image_emotion(&probe, &[0.0, 0.0], "clip"), Err(Error::SpaceMismatch { .. })));
        assert!(matches!(probe.predict(&[0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn missing_embedding_is_an_error() {
        let targets: BTreeMap<String, EmotionDistribution> = [("zz".into(), EmotionDistribution::uniform())].into();
        assert_eq!(
            train_image_probe(&table(), &targets, ProbeHyper::default()).map(|_| ()),
            Err(Error::MissingEmbedding("zz".into()))
        );
    }
}
