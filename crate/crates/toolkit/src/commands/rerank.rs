use std::path::{Path, PathBuf};

use aec_core::corpus::EmbeddingTable;
use aec_core::metrics::GenerationRecord;
use aec_core::pragmatics::{
    beta_sweep, calibrate, listener_logprob, rerank, CalibrationMode, Candidate, CandidateSet, PragmaticConfig,
    Ranking, Rescale, DEFAULT_TEMPERATURE,
};
use aec_core::text::tokenize;
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{is_false, num, out_dir, Context};
use crate::config::required;
use crate::error::CliError;
use crate::header::Header;
use crate::io::embeddings::load_embeddings;
use crate::io::lines::read_jsonl;

/// Fuse speaker and listener scores to re-rank candidate captions.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct RerankArgs {
    /// Candidate sets, one line-JSON object per image.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<PathBuf>,
    /// Candidate caption embeddings.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text_emb: Option<PathBuf>,
    /// Image embeddings.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub img_emb: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Listener weight in [0, 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Weights of the β sweep.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<f64>>,
    /// Fixed speaker rescale factor s.
    #[arg(long, conflicts_with = "calibrate")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rescale: Option<f64>,
    /// Estimate s from the listener and speaker score magnitudes.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub calibrate: bool,
    /// Calibrate one s over all sets (global) or one per set (per-set).
    #[arg(long, value_parser = ["global", "per-set"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration_mode: Option<String>,
    /// Separate candidate sets to calibrate s on (global mode only).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration_candidates: Option<PathBuf>,
    /// Listener softmax temperature.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RerankConfig {
    pub candidates: Option<PathBuf>,
    pub text_emb: Option<PathBuf>,
    pub img_emb: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub beta: f64,
    pub betas: Vec<f64>,
    pub rescale: Option<f64>,
    pub calibrate: bool,
    pub calibration_mode: CalibrationMode,
    pub calibration_candidates: Option<PathBuf>,
    pub temperature: f64,
}

impl Default for RerankConfig {
    fn default() -> Self {
        Self {
            candidates: None,
            text_emb: None,
            img_emb: None,
            out: None,
            beta: 0.5,
            betas: (0..=10).map(|i| i as f64 / 10.0).collect(),
            rescale: None,
            calibrate: false,
            calibration_mode: CalibrationMode::Global,
            calibration_candidates: None,
            temperature: DEFAULT_TEMPERATURE,
        }
    }
}

/// One candidate of the re-ranked output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate {
    #[serde(flatten)]
    pub candidate: Candidate,
    pub score: f64,
    /// 1 for the selected candidate.
    pub rank: usize,
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedSet {
    pub image_id: String,
    pub image_embedding_id: String,
    pub candidates: Vec<RankedCandidate>,
}

#[derive(Debug, Serialize)]
struct SweepRow {
    beta: f64,
    mean_log_p_listener: f64,
    mean_log_p_speaker: f64,
    changed_from_speaker_choice: f64,
}

#[derive(Debug, Serialize)]
struct RerankSummary {
    sets: usize,
    candidates: usize,
    beta: f64,
    rescale: Rescale,
    calibrated: bool,
    mean_log_p_listener: f64,
    mean_log_p_speaker: f64,
    sweep: Vec<SweepRow>,
}

/// Read candidate sets, tokenizing candidates that carry no tokens.
pub fn load_candidates(path: &Path) -> Result<Vec<CandidateSet>, CliError> {
    let mut sets: Vec<CandidateSet> = read_jsonl(path)?;
    for set in &mut sets {
        for c in &mut set.candidates {
            if c.tokens.is_empty() {
                c.tokens = tokenize(&c.text);
            }
        }
        set.validate().map_err(|e| CliError::Data(anyhow::anyhow!("{}: {e}", path.display())))?;
    }
    if sets.is_empty() {
        return Err(CliError::Data(anyhow::anyhow!("{}: no candidate sets", path.display())));
    }
    Ok(sets)
}

fn score_sets(
    sets: &mut [CandidateSet],
    text: &EmbeddingTable,
    images: &EmbeddingTable,
    t: f64,
) -> aec_core::Result<()> {
    sets.par_iter_mut().try_for_each(|set| listener_logprob(set, text, images, t))
}

fn mean_selected(selected: &[&Candidate]) -> (f64, f64) {
    let n = selected.len() as f64;
    let l = selected.iter().map(|c| c.log_p_listener.unwrap_or(0.0)).sum::<f64>() / n;
    let s = selected.iter().map(|c| c.log_p_speaker).sum::<f64>() / n;
    (l, s)
}

pub fn run(cfg: &RerankConfig, ctx: &Context) -> Result<(), CliError> {
    let candidates_path = required(&cfg.candidates, "candidates")?;
    let text_path = required(&cfg.text_emb, "text-emb")?;
    let img_path = required(&cfg.img_emb, "img-emb")?;
    if cfg.calibrate && cfg.rescale.is_some() {
        return Err(CliError::usage("--calibrate and --rescale are mutually exclusive"));
    }
    if cfg.calibration_candidates.is_some() && !cfg.calibrate {
        return Err(CliError::usage("--calibration-candidates requires --calibrate"));
    }
    if cfg.calibration_candidates.is_some() && cfg.calibration_mode == CalibrationMode::PerSet {
        return Err(CliError::usage("--calibration-candidates only applies to global calibration"));
    }
    PragmaticConfig::new(cfg.beta, 1.0).map_err(|e| CliError::usage(e.to_string()))?;
    if let Some(b) = cfg.betas.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        return Err(CliError::usage(format!("sweep weight {b} lies outside [0, 1]")));
    }
    let mut out = out_dir(&cfg.out)?;
    let header = Header::new("rerank", cfg);

    let text = load_embeddings(text_path)?;
    let images = load_embeddings(img_path)?;
    let mut sets = load_candidates(candidates_path)?;
    ctx.progress(format!("scoring {} candidate sets", sets.len()));
    score_sets(&mut sets, &text, &images, cfg.temperature)?;

    let rescale = if cfg.calibrate {
        match &cfg.calibration_candidates {
            Some(path) => {
                let mut calibration = load_candidates(path)?;
                score_sets(&mut calibration, &text, &images, cfg.temperature)?;
                calibrate(&calibration, CalibrationMode::Global)?
            }
            None => calibrate(&sets, cfg.calibration_mode)?,
        }
    } else {
        Rescale::Global(cfg.rescale.unwrap_or(1.0))
    };
    if let Rescale::Global(s) = rescale {
        ctx.progress(format!("rescale s = {s}"));
    }

    let rankings = sets
        .par_iter()
        .enumerate()
        .map(|(k, set)| rerank(set, &PragmaticConfig::new(cfg.beta, rescale.for_set(k))?))
        .collect::<aec_core::Result<Vec<Ranking>>>()?;

    let ranked: Vec<RankedSet> = sets
        .iter()
        .zip(&rankings)
        .map(|(set, ranking)| {
            let ranks = ranking.ranks();
            RankedSet {
                image_id: set.image_id.clone(),
                image_embedding_id: set.image_embedding_id.clone(),
                candidates: set
                    .candidates
                    .iter()
                    .enumerate()
                    .map(|(i, c)| RankedCandidate {
                        candidate: c.clone(),
                        score: ranking.scores[i],
                        rank: ranks[i] + 1,
                        selected: i == ranking.selected,
                    })
                    .collect(),
            }
        })
        .collect();
    out.write_jsonl("reranked.jsonl", &header, &ranked)?;

    let selected: Vec<&Candidate> = sets.iter().zip(&rankings).map(|(s, r)| &s.candidates[r.selected]).collect();
    let generations = sets.iter().zip(&selected).map(|(set, c)| GenerationRecord {
        image_id: set.image_id.clone(),
        text: c.text.clone(),
        tokens: c.tokens.clone(),
        text_embedding_id: Some(c.text_embedding_id.clone().unwrap_or_else(|| c.text.clone())),
        emotion: c.emotion,
    });
    out.write_jsonl("selected.jsonl", &header, generations)?;

    let sweep = beta_sweep(&sets, &cfg.betas, &rescale)?;
    let speaker_choice: Vec<usize> = sets
        .iter()
        .enumerate()
        .map(|(k, set)| rerank(set, &PragmaticConfig::new(0.0, rescale.for_set(k))?).map(|r| r.selected))
        .collect::<aec_core::Result<_>>()?;
    let rows: Vec<SweepRow> = (0..sweep.betas.len())
        .map(|b| {
            let (l, s) = mean_selected(&sweep.selections(&sets, b));
            let changed = sweep.selected[b].iter().zip(&speaker_choice).filter(|(a, c)| a != c).count();
            SweepRow {
                beta: sweep.betas[b],
                mean_log_p_listener: l,
                mean_log_p_speaker: s,
                changed_from_speaker_choice: changed as f64 / sets.len() as f64,
            }
        })
        .collect();
    out.write_csv(
        "sweep.csv",
        &header,
        &["beta", "mean_log_p_listener", "mean_log_p_speaker", "changed_from_speaker_choice"],
        rows.iter().map(|r| {
            [num(r.beta), num(r.mean_log_p_listener), num(r.mean_log_p_speaker), num(r.changed_from_speaker_choice)]
        }),
    )?;
    let (mean_l, mean_s) = mean_selected(&selected);
    let summary = RerankSummary {
        sets: sets.len(),
        candidates: sets.iter().map(|s| s.candidates.len()).sum(),
        beta: cfg.beta,
        rescale,
        calibrated: cfg.calibrate,
        mean_log_p_listener: mean_l,
        mean_log_p_speaker: mean_s,
        sweep: rows,
    };
    out.write_json("rerank.json", &header, &summary)?;
    Ok(())
}
