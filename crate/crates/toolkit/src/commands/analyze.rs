use std::path::PathBuf;

use aec_core::analysis::{analysis_report, PosCategory};
use aec_core::lexicons::Histogram;
use aec_core::{EmotionLabel, Measured};
use clap::Args;
use serde::{Deserialize, Serialize};

use super::{num, out_dir, rule, Context};
use crate::config::required;
use crate::error::CliError;
use crate::header::{Header, OutputDir};
use crate::io::annotations::{load_annotations, OnError};
use crate::io::lexicons::LexiconPaths;

/// Corpus statistics: POS, emotions, agreement, lexicon scores, similes.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct AnalyzeArgs {
    /// Annotation line-JSON file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotations: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Fraction of an image's annotations a label must exceed.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub majority_threshold: Option<f64>,
    /// Concreteness lexicon (term, score).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concreteness: Option<PathBuf>,
    /// Sentiment valence lexicon (term, valence).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentiment_valence: Option<PathBuf>,
    /// Sentiment booster lexicon (term, increment).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentiment_boosters: Option<PathBuf>,
    /// Negation word list.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentiment_negations: Option<PathBuf>,
    /// Subjectivity lexicon (term, weight).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subjectivity: Option<PathBuf>,
    /// Simile trigger phrases, one per line.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similes: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyzeConfig {
    pub annotations: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub majority_threshold: f64,
    pub majority_strict: bool,
    pub concreteness: Option<PathBuf>,
    pub sentiment_valence: Option<PathBuf>,
    pub sentiment_boosters: Option<PathBuf>,
    pub sentiment_negations: Option<PathBuf>,
    pub subjectivity: Option<PathBuf>,
    pub similes: Option<PathBuf>,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self {
            annotations: None,
            out: None,
            majority_threshold: 0.5,
            majority_strict: true,
            concreteness: None,
            sentiment_valence: None,
            sentiment_boosters: None,
            sentiment_negations: None,
            subjectivity: None,
            similes: None,
        }
    }
}

impl AnalyzeConfig {
    pub fn lexicon_paths(&self) -> LexiconPaths {
        LexiconPaths {
            concreteness: self.concreteness.clone(),
            sentiment_valence: self.sentiment_valence.clone(),
            sentiment_boosters: self.sentiment_boosters.clone(),
            sentiment_negations: self.sentiment_negations.clone(),
            subjectivity: self.subjectivity.clone(),
            similes: self.similes.clone(),
        }
    }
}

fn histogram_csv(out: &mut OutputDir, name: &str, header: &Header, h: &Histogram) -> Result<(), CliError> {
    let fractions = h.fractions();
    let rows = (0..h.counts.len()).map(|i| {
        let (lo, hi) = h.edges(i);
        [num(lo), num(hi), h.counts[i].to_string(), num(fractions[i])]
    });
    out.write_csv(name, header, &["lower", "upper", "count", "fraction"], rows)?;
    Ok(())
}

fn unavailable_csv<T>(out: &mut OutputDir, name: &str, header: &Header, m: &Measured<T>) -> Result<bool, CliError> {
    let reason = match m {
        Measured::Available(_) => return Ok(false),
        Measured::Unavailable(r) => format!("unavailable: {r}"),
        Measured::Unsupported(r) => format!("unsupported: {r}"),
    };
    out.write_csv(name, header, &["status"], [[reason]])?;
    Ok(true)
}

pub fn run(cfg: &AnalyzeConfig, ctx: &Context) -> Result<(), CliError> {
    let annotations = required(&cfg.annotations, "annotations")?;
    let majority = rule(cfg.majority_threshold, cfg.majority_strict)?;
    let lexicons = cfg.lexicon_paths().load()?;
    let mut out = out_dir(&cfg.out)?;
    let header = Header::new("analyze", cfg);

    let corpus = load_annotations(annotations, OnError::Fail)?.corpus;
    ctx.progress(format!("analyzing {} records over {} images", corpus.len(), corpus.num_images()));
    let report = analysis_report(&corpus, &lexicons, majority)?;
    out.write_json("analysis.json", &header, &report)?;

    let c = &report.corpus;
    out.write_csv(
        "corpus_summary.csv",
        &header,
        &["records", "images", "mean_tokens", "mean_words"],
        [[c.records.to_string(), c.images.to_string(), num(c.mean_tokens), num(c.mean_words)]],
    )?;
    out.write_csv(
        "sources.csv",
        &header,
        &["source", "records"],
        c.records_per_source.iter().map(|(s, n)| [s.as_str().to_string(), n.to_string()]),
    )?;

    if !unavailable_csv(&mut out, "pos_per_caption.csv", &header, &report.pos_per_caption)? {
        let p = report.pos_per_caption.value().expect("available");
        out.write_csv(
            "pos_per_caption.csv",
            &header,
            &["words", "nouns", "pronouns", "adjectives", "adpositions", "verbs", "captions"],
            [[
                num(p.words),
                num(p.nouns),
                num(p.pronouns),
                num(p.adjectives),
                num(p.adpositions),
                num(p.verbs),
                p.captions.to_string(),
            ]],
        )?;
    }
    if !unavailable_csv(&mut out, "pos_per_image.csv", &header, &report.pos_per_image)? {
        let p = report.pos_per_image.value().expect("available");
        let name = |c: PosCategory| {
            serde_json::to_value(c).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
        };
        out.write_csv(
            "pos_per_image.csv",
            &header,
            &["category", "distinct_per_image", "normalized", "images"],
            PosCategory::ALL
                .iter()
                .map(|&cat| [name(cat), num(p.raw(cat)), num(p.normalized(cat)), p.images.to_string()]),
        )?;
    }

    let e = &report.emotions;
    out.write_csv(
        "emotions.csv",
        &header,
        &["emotion", "count", "fraction"],
        EmotionLabel::ALL.iter().map(|l| [l.as_str().to_string(), e.counts[l].to_string(), num(e.fractions[l])]),
    )?;
    out.write_csv(
        "valence.csv",
        &header,
        &["group", "fraction"],
        [
            ["positive".to_string(), num(e.positive)],
            ["negative".to_string(), num(e.negative)],
            ["something-else".to_string(), num(e.something_else)],
        ],
    )?;

    let a = &report.agreement;
    out.write_csv(
        "agreement.csv",
        &header,
        &["statistic", "value"],
        [
            ["images".to_string(), a.images.to_string()],
            ["strong_majority_images".to_string(), a.strong_majority_images.to_string()],
            ["strong_majority_fraction".to_string(), num(a.strong_majority_fraction)],
            ["unique_strong_majority_images".to_string(), a.unique_strong_majority_images.to_string()],
            ["tied_majority_images".to_string(), a.tied_majority_images.to_string()],
            ["mixed_valence_images".to_string(), a.mixed_valence_images.to_string()],
            ["mixed_valence_fraction".to_string(), num(a.mixed_valence_fraction)],
        ],
    )?;
    out.write_csv(
        "majority_composition.csv",
        &header,
        &["emotion", "images", "fraction"],
        a.composition.iter().map(|(l, n)| {
            [l.as_str().to_string(), n.to_string(), num(a.composition_fractions.get(l).copied().unwrap_or(0.0))]
        }),
    )?;

    if !unavailable_csv(&mut out, "concreteness.csv", &header, &report.concreteness)? {
        histogram_csv(
            &mut out,
            "concreteness.csv",
            &header,
            &report.concreteness.value().expect("available").histogram,
        )?;
    }
    histogram_csv(&mut out, "subjectivity.csv", &header, &report.subjectivity.histogram)?;
    histogram_csv(&mut out, "sentiment.csv", &header, &report.sentiment.histogram)?;
    out.write_csv(
        "similes.csv",
        &header,
        &["explanations_with_simile", "fraction"],
        [[report.similes.explanations_with_simile.to_string(), num(report.similes.fraction)]],
    )?;
    ctx.progress(format!("wrote {} files to {}", out.written().len(), out.root().display()));
    Ok(())
}
