//! Linear emotion predictors and their evaluation.
//!
//! Both models are softmax-linear and trained by plain mini-batch gradient
//! descent on convex objectives. Each objective is exposed as a public type
//! with `loss` and `gradient` so the analytic gradients can be checked
//! against finite differences from outside the crate.

mod confusion;
mod features;
mod probe;
mod text;

pub use confusion::{evaluate_image_probe, evaluate_text_classifier, ConfusionMatrix, Evaluation};
pub use features::NgramFeatures;
pub use probe::{
    empirical_targets, predict_image_emotion, train_image_probe, ImageEmotionProbe, ProbeHyper, ProbeObjective,
};
pub use text::{predict_emotion, train_text_emotion, TextEmotionClassifier, TextHyper, TextObjective};

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::EmotionDistribution;

/// Anything that maps a token list to an emotion distribution.
pub trait EmotionPredictor {
    fn predict_tokens(&self, tokens: &[alloc::string::String]) -> EmotionDistribution;
}

impl<T: EmotionPredictor + ?Sized> EmotionPredictor for &T {
    fn predict_tokens(&self, tokens: &[alloc::string::String]) -> EmotionDistribution {
        (**self).predict_tokens(tokens)
    }
}

/// Loss trajectory of one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Full-data objective before training (index 0) and after each epoch.
    pub loss_history: Vec<f64>,
    pub final_loss: f64,
    pub examples: usize,
    /// Set when the training data contains a single class.
    pub degenerate: bool,
}

pub(crate) fn batches(n: usize, batch_size: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Vec<Vec<usize>> {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let size = if batch_size == 0 { n } else { batch_size.min(n) };
    order.chunks(size.max(1)).map(<[usize]>::to_vec).collect()
}
