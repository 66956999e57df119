use std::path::{Path, PathBuf};

use aec_core::analysis::strong_majority_labels;
use aec_core::classifiers::EmotionPredictor;
use aec_core::metrics::{
    evaluate_all, EvalConfig, EvalInputs, GenerationRecord, MetricReport, DEFAULT_LCS_SAMPLE, TABLE_COLUMNS,
};
use aec_core::text::tokenize;
use clap::Args;
use serde::{Deserialize, Serialize};

use super::{file_stem, is_false, measured_cell, negate, out_dir, rule, Context};
use crate::config::required;
use crate::error::CliError;
use crate::header::Header;
use crate::io::annotations::{load_annotations, OnError};
use crate::io::embeddings::load_embeddings;
use crate::io::lexicons::LexiconPaths;
use crate::io::lines::read_jsonl;
use crate::io::model::load_text_classifier;

/// Compute the metric battery for one set of generated captions.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct EvalArgs {
    /// Generated captions, one line-JSON object per caption.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generations: Option<PathBuf>,
    /// Human reference annotations of the evaluated images.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refs: Option<PathBuf>,
    /// Training annotations for Max-LCS.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train_refs: Option<PathBuf>,
    /// Generation text embeddings.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text_emb: Option<PathBuf>,
    /// Image embeddings in the same space.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub img_emb: Option<PathBuf>,
    /// Reference caption embeddings with ids `image#k`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ref_emb: Option<PathBuf>,
    /// Text emotion classifier model.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clf: Option<PathBuf>,
    /// Annotations whose strong majorities define the expected emotion (default: --refs).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub majority_from: Option<PathBuf>,
    /// Simile trigger phrases.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similes: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Name of this generation set in reports (default: file stem).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Disable add-one smoothing of sentence BLEU.
    #[arg(long)]
    #[serde(rename = "bleu_smoothing", serialize_with = "negate", skip_serializing_if = "is_false")]
    pub no_smoothing: bool,
    /// Training utterances sampled for Max-LCS.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lcs_sample: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub majority_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalCliConfig {
    pub generations: Option<PathBuf>,
    pub refs: Option<PathBuf>,
    pub train_refs: Option<PathBuf>,
    pub text_emb: Option<PathBuf>,
    pub img_emb: Option<PathBuf>,
    pub ref_emb: Option<PathBuf>,
    pub clf: Option<PathBuf>,
    pub majority_from: Option<PathBuf>,
    pub similes: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub name: Option<String>,
    pub bleu_smoothing: bool,
    pub lcs_sample: usize,
    pub seed: u64,
    pub majority_threshold: f64,
    pub majority_strict: bool,
}

impl Default for EvalCliConfig {
    fn default() -> Self {
        Self {
            generations: None,
            refs: None,
            train_refs: None,
            text_emb: None,
            img_emb: None,
            ref_emb: None,
            clf: None,
            majority_from: None,
            similes: None,
            out: None,
            name: None,
            bleu_smoothing: true,
            lcs_sample: DEFAULT_LCS_SAMPLE,
            seed: 0,
            majority_threshold: 0.5,
            majority_strict: true,
        }
    }
}

/// Contents of `metrics.json` after the header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsDocument {
    pub name: String,
    pub report: MetricReport,
}

pub fn load_generations(path: &Path) -> Result<Vec<GenerationRecord>, CliError> {
    let mut gens: Vec<GenerationRecord> = read_jsonl(path)?;
    for g in &mut gens {
        if g.tokens.is_empty() {
            g.tokens = tokenize(&g.text);
        }
        g.validate().map_err(|e| CliError::Data(anyhow::anyhow!("{}: {e}", path.display())))?;
    }
    Ok(gens)
}

pub fn run(cfg: &EvalCliConfig, ctx: &Context) -> Result<(), CliError> {
    let gens_path = required(&cfg.generations, "generations")?;
    let majority = rule(cfg.majority_threshold, cfg.majority_strict)?;
    let similes = LexiconPaths { similes: cfg.similes.clone(), ..LexiconPaths::default() }.similes()?;
    let mut out = out_dir(&cfg.out)?;
    let header = Header::new("eval", cfg);
    let name = cfg.name.clone().unwrap_or_else(|| file_stem(gens_path));

    let generations = load_generations(gens_path)?;
    ctx.progress(format!("evaluating {} generations as {name:?}", generations.len()));
    let load_corpus = |p: &Option<PathBuf>| -> Result<_, CliError> {
        p.as_deref().map(|p| load_annotations(p, OnError::Fail).map(|l| l.corpus)).transpose().map_err(Into::into)
    };
    let load_table = |p: &Option<PathBuf>| -> Result<_, CliError> {
        p.as_deref().map(load_embeddings).transpose().map_err(Into::into)
    };
    let references = load_corpus(&cfg.refs)?;
    let training = load_corpus(&cfg.train_refs)?;
    let majority_corpus = match &cfg.majority_from {
        Some(_) => load_corpus(&cfg.majority_from)?,
        None => references.clone(),
    };
    let majority_labels = majority_corpus.as_ref().map(|c| strong_majority_labels(c, majority));
    let text = load_table(&cfg.text_emb)?;
    let images = load_table(&cfg.img_emb)?;
    let refs_emb = load_table(&cfg.ref_emb)?;
    let classifier = cfg.clf.as_deref().map(load_text_classifier).transpose()?;

    let mut inputs = EvalInputs::new(&generations, &similes);
    inputs.references = references.as_ref();
    inputs.training = training.as_ref();
    inputs.text_embeddings = text.as_ref();
    inputs.image_embeddings = images.as_ref();
    inputs.reference_embeddings = refs_emb.as_ref();
    inputs.classifier = classifier.as_ref().map(|c| c as &dyn EmotionPredictor);
    inputs.majority = majority_labels.as_ref();
    let eval_config =
        EvalConfig { bleu_smoothing: cfg.bleu_smoothing, lcs_sample_size: cfg.lcs_sample, lcs_seed: cfg.seed };
    let report = evaluate_all(&inputs, eval_config)?;

    let mut columns = vec!["name"];
    columns.extend(TABLE_COLUMNS);
    let mut row = vec![name.clone()];
    row.extend(report.table_row().iter().map(|m| measured_cell(m)));
    out.write_csv("metrics.csv", &header, &columns, [row])?;
    out.write_json("metrics.json", &header, &MetricsDocument { name, report })?;
    Ok(())
}
