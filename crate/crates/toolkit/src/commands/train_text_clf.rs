use std::path::PathBuf;

use aec_core::classifiers::{evaluate_text_classifier, train_text_emotion, Evaluation, TextHyper, TrainReport};
use aec_core::corpus::AnnotationCorpus;
use aec_core::emotion::NUM_EMOTIONS;
use aec_core::EmotionLabel;
use clap::Args;
use serde::{Deserialize, Serialize};

use super::{is_false, num, out_dir, Context};
use crate::config::required;
use crate::error::CliError;
use crate::header::{Header, OutputDir};
use crate::io::annotations::{load_annotations, OnError};
use crate::io::model::Model;

/// Train the bag-of-n-grams text emotion classifier.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct TrainTextClfArgs {
    /// Training annotations.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train: Option<PathBuf>,
    /// Held-out annotations to evaluate on.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epochs: Option<usize>,
    /// Mini-batch size; 0 means full batch.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2: Option<f64>,
    /// Weight examples by inverse class frequency.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub class_weighting: bool,
    /// Minimum document frequency of an n-gram feature.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_feature_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainTextClfConfig {
    pub train: Option<PathBuf>,
    pub eval: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub l2: f64,
    pub seed: u64,
    pub class_weighting: bool,
    pub min_feature_count: usize,
}

impl Default for TrainTextClfConfig {
    fn default() -> Self {
        let h = TextHyper::default();
        Self {
            train: None,
            eval: None,
            out: None,
            learning_rate: h.learning_rate,
            epochs: h.epochs,
            batch_size: h.batch_size,
            l2: h.l2,
            seed: h.seed,
            class_weighting: h.class_weighting,
            min_feature_count: h.min_feature_count,
        }
    }
}

impl TrainTextClfConfig {
    pub fn hyper(&self) -> TextHyper {
        TextHyper {
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            batch_size: self.batch_size,
            l2: self.l2,
            seed: self.seed,
            class_weighting: self.class_weighting,
            min_feature_count: self.min_feature_count,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MajorityBaseline {
    pub label: EmotionLabel,
    pub accuracy: f64,
}

#[derive(Debug, Serialize)]
struct TextTrainSummary {
    features: usize,
    report: TrainReport,
    evaluation: Option<Evaluation>,
    majority_baseline: Option<MajorityBaseline>,
}

/// Most frequent training label (lowest index on ties) and its accuracy on `eval`.
pub fn majority_baseline(train: &AnnotationCorpus, eval: &AnnotationCorpus) -> Option<MajorityBaseline> {
    let mut counts = [0u64; NUM_EMOTIONS];
    for r in train.records() {
        counts[r.emotion.index()] += 1;
    }
    let best = (0..NUM_EMOTIONS).max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a)))?;
    let label = EmotionLabel::from_index(best)?;
    if eval.is_empty() {
        return None;
    }
    let hits = eval.records().iter().filter(|r| r.emotion == label).count();
    Some(MajorityBaseline { label, accuracy: hits as f64 / eval.len() as f64 })
}

pub(crate) fn loss_csv(out: &mut OutputDir, header: &Header, report: &TrainReport) -> Result<(), CliError> {
    out.write_csv(
        "loss.csv",
        header,
        &["epoch", "loss"],
        report.loss_history.iter().enumerate().map(|(i, l)| [i.to_string(), num(*l)]),
    )?;
    Ok(())
}

pub fn run(cfg: &TrainTextClfConfig, ctx: &Context) -> Result<(), CliError> {
    let train_path = required(&cfg.train, "train")?;
    let mut out = out_dir(&cfg.out)?;
    let header = Header::new("train-text-clf", cfg);
    let train = load_annotations(train_path, OnError::Fail)?.corpus;
    ctx.progress(format!("training on {} records", train.len()));
    let (clf, report) = train_text_emotion(&train, cfg.hyper())?;
    if report.degenerate {
        ctx.progress("warning: training data has a single emotion class");
    }
    let (evaluation, baseline) = match &cfg.eval {
        Some(path) => {
            let eval = load_annotations(path, OnError::Fail)?.corpus;
            let evaluation = evaluate_text_classifier(&clf, &eval)?;
            ctx.progress(format!(
                "accuracy {:.4}, binary {:.4} on {} records",
                evaluation.accuracy,
                evaluation.binary_accuracy,
                eval.len()
            ));
            (Some(evaluation), majority_baseline(&train, &eval))
        }
        None => (None, None),
    };
    out.write_bytes("model.bin", &Model::TextEmotion(clf.clone()).to_bytes(&header.config))?;
    loss_csv(&mut out, &header, &report)?;
    let summary = TextTrainSummary { features: clf.features().len(), report, evaluation, majority_baseline: baseline };
    out.write_json("train.json", &header, &summary)?;
    Ok(())
}
