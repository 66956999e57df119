use std::path::PathBuf;

use aec_core::classifiers::{
    empirical_targets, evaluate_image_probe, train_image_probe, Evaluation, ProbeHyper, TrainReport,
};
use clap::Args;
use serde::{Deserialize, Serialize};

use super::train_text_clf::loss_csv;
use super::{out_dir, rule, Context};
use crate::config::required;
use crate::error::CliError;
use crate::header::Header;
use crate::io::annotations::{load_annotations, OnError};
use crate::io::embeddings::load_embeddings;
use crate::io::model::Model;

/// Train the linear image-to-emotion-distribution probe.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct TrainImageProbeArgs {
    /// Training annotations; per-image label frequencies are the targets.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotations: Option<PathBuf>,
    /// Image embeddings.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image_emb: Option<PathBuf>,
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
    /// Fraction of an image's annotations its label must exceed to be scored.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub majority_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainImageProbeConfig {
    pub annotations: Option<PathBuf>,
    pub image_emb: Option<PathBuf>,
    pub eval: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub l2: f64,
    pub seed: u64,
    pub majority_threshold: f64,
    pub majority_strict: bool,
}

impl Default for TrainImageProbeConfig {
    fn default() -> Self {
        let h = ProbeHyper::default();
        Self {
            annotations: None,
            image_emb: None,
            eval: None,
            out: None,
            learning_rate: h.learning_rate,
            epochs: h.epochs,
            batch_size: h.batch_size,
            l2: h.l2,
            seed: h.seed,
            majority_threshold: 0.5,
            majority_strict: true,
        }
    }
}

impl TrainImageProbeConfig {
    pub fn hyper(&self) -> ProbeHyper {
        ProbeHyper {
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            batch_size: self.batch_size,
            l2: self.l2,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Serialize)]
struct ProbeTrainSummary {
    space_tag: String,
    dim: usize,
    images: usize,
    report: TrainReport,
    evaluated_on: &'static str,
    evaluation: Evaluation,
}

pub fn run(cfg: &TrainImageProbeConfig, ctx: &Context) -> Result<(), CliError> {
    let annotations = required(&cfg.annotations, "annotations")?;
    let image_emb = required(&cfg.image_emb, "image-emb")?;
    let majority = rule(cfg.majority_threshold, cfg.majority_strict)?;
    let mut out = out_dir(&cfg.out)?;
    let header = Header::new("train-image-probe", cfg);
    let train = load_annotations(annotations, OnError::Fail)?.corpus;
    let table = load_embeddings(image_emb)?;
    let targets = empirical_targets(&train);
    ctx.progress(format!("training probe on {} images in space {:?}", targets.len(), table.space_tag()));
    let (probe, report) = train_image_probe(&table, &targets, cfg.hyper())?;
    if report.degenerate {
        ctx.progress("warning: every image shares one dominant emotion");
    }
    let (evaluated_on, eval) = match &cfg.eval {
        Some(path) => ("eval", load_annotations(path, OnError::Fail)?.corpus),
        None => ("train", train),
    };
    let evaluation = evaluate_image_probe(&probe, &table, &eval, majority)?;
    ctx.progress(format!("argmax accuracy {:.4} on {evaluated_on} majorities", evaluation.accuracy));
    out.write_bytes("model.bin", &Model::ImageProbe(probe.clone()).to_bytes(&header.config))?;
    loss_csv(&mut out, &header, &report)?;
    let summary = ProbeTrainSummary {
        space_tag: probe.space_tag().into(),
        dim: probe.dim(),
        images: targets.len(),
        report,
        evaluated_on,
        evaluation,
    };
    out.write_json("train.json", &header, &summary)?;
    Ok(())
}
