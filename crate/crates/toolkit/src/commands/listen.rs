use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use aec_core::corpus::EmbeddingTable;
use aec_core::listener::{
    retrieval_accuracy, train_contrastive_projection, ContrastiveHyper, ContrastiveProjection, ProjectionInit,
    RetrievalCurve,
};
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{num, out_dir, Context};
use crate::config::required;
use crate::error::{CliError, FormatError};
use crate::header::Header;
use crate::io::embeddings::load_embeddings;
use crate::io::model::{load_projection, Model};
use crate::io::read_to_string;

pub const PROJECTED_SPACE: &str = "projected";

/// Retrieval accuracy of captions against distracting images.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ListenArgs {
    /// Caption embeddings.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text_emb: Option<PathBuf>,
    /// Image embeddings.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub img_emb: Option<PathBuf>,
    /// Evaluation pairs, `caption_id<TAB>image_id` per line.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Distractor counts.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distractors: Option<Vec<usize>>,
    /// Number of seeds, counting up from --seed.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<usize>,
    /// Pairs to train a contrastive projection on before evaluation.
    #[arg(long, conflicts_with = "projection")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train_pairs: Option<PathBuf>,
    /// Previously trained projection to apply before evaluation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proj_dim: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epochs: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    /// Projection initialization: random or identity.
    #[arg(long, value_parser = ["random", "identity"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ListenConfig {
    pub text_emb: Option<PathBuf>,
    pub img_emb: Option<PathBuf>,
    pub pairs: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub distractors: Vec<usize>,
    pub seeds: usize,
    pub seed: u64,
    pub train_pairs: Option<PathBuf>,
    pub projection: Option<PathBuf>,
    pub proj_dim: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub temperature: f64,
    pub init: ProjectionInit,
}

impl Default for ListenConfig {
    fn default() -> Self {
        let h = ContrastiveHyper::default();
        Self {
            text_emb: None,
            img_emb: None,
            pairs: None,
            out: None,
            distractors: vec![1, 2, 4, 6, 8, 10],
            seeds: 5,
            seed: 0,
            train_pairs: None,
            projection: None,
            proj_dim: h.proj_dim,
            learning_rate: h.learning_rate,
            epochs: h.epochs,
            batch_size: h.batch_size,
            temperature: h.temperature,
            init: h.init,
        }
    }
}

impl ListenConfig {
    pub fn hyper(&self) -> ContrastiveHyper {
        ContrastiveHyper {
            proj_dim: self.proj_dim,
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            batch_size: self.batch_size,
            temperature: self.temperature,
            seed: self.seed,
            init: self.init,
        }
    }
}

/// Tab-separated `caption_id, image_id` lines; `#` starts a comment.
pub fn read_pairs(path: &Path) -> Result<Vec<(String, String)>, FormatError> {
    let mut pairs = Vec::new();
    for (i, line) in read_to_string(path)?.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(c), Some(im), None) if !c.is_empty() && !im.is_empty() => pairs.push((c.to_string(), im.to_string())),
            _ => {
                return Err(FormatError::Line {
                    path: path.display().to_string(),
                    line: i + 1,
                    message: "expected caption_id<TAB>image_id".into(),
                })
            }
        }
    }
    Ok(pairs)
}

/// Pair every caption id `image#k` (or a bare image id) with its image.
pub fn default_pairs(captions: &EmbeddingTable, images: &EmbeddingTable) -> Vec<(String, String)> {
    captions
        .ids()
        .iter()
        .filter_map(|id| {
            let image = id.rsplit_once('#').map_or(id.as_str(), |(img, _)| img);
            images.get(image).map(|_| (id.clone(), image.to_string()))
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct ListenSummary {
    pairs: usize,
    images: usize,
    space_tag: String,
    projection: Option<ProjectionSummary>,
    curve: RetrievalCurve,
}

#[derive(Debug, Serialize)]
struct ProjectionSummary {
    source: &'static str,
    proj_dim: usize,
    temperature: f64,
    training_pairs: Option<usize>,
    loss_history: Option<Vec<f64>>,
}

pub fn run(cfg: &ListenConfig, ctx: &Context) -> Result<(), CliError> {
    let text_path = required(&cfg.text_emb, "text-emb")?;
    let img_path = required(&cfg.img_emb, "img-emb")?;
    if cfg.train_pairs.is_some() && cfg.projection.is_some() {
        return Err(CliError::usage("--train-pairs and --projection are mutually exclusive"));
    }
    if cfg.distractors.is_empty() || cfg.seeds == 0 {
        return Err(CliError::usage("need at least one distractor count and one seed"));
    }
    let mut out = out_dir(&cfg.out)?;
    let header = Header::new("listen", cfg);
    let mut captions = load_embeddings(text_path)?;
    let mut images = load_embeddings(img_path)?;
    let pairs = match &cfg.pairs {
        Some(p) => read_pairs(p)?,
        None => default_pairs(&captions, &images),
    };
    if pairs.is_empty() {
        return Err(CliError::Data(anyhow::anyhow!("no caption/image pairs found")));
    }

    let mut projection_summary = None;
    let projection: Option<ContrastiveProjection> = match (&cfg.train_pairs, &cfg.projection) {
        (Some(path), _) => {
            let train = read_pairs(path)?;
            ctx.progress(format!("training projection on {} pairs", train.len()));
            let (proj, report) = train_contrastive_projection(&captions, &images, &train, cfg.hyper())?;
            out.write_bytes("projection.bin", &Model::ContrastiveProjection(proj.clone()).to_bytes(&header.config))?;
            projection_summary = Some(ProjectionSummary {
                source: "trained",
                proj_dim: proj.proj_dim(),
                temperature: proj.temperature(),
                training_pairs: Some(train.len()),
                loss_history: Some(report.loss_history),
            });
            Some(proj)
        }
        (None, Some(path)) => {
            let proj = load_projection(path)?;
            projection_summary = Some(ProjectionSummary {
                source: "loaded",
                proj_dim: proj.proj_dim(),
                temperature: proj.temperature(),
                training_pairs: None,
                loss_history: None,
            });
            Some(proj)
        }
        (None, None) => None,
    };
    if let Some(proj) = &projection {
        captions = proj.project_text_table(&captions, PROJECTED_SPACE)?;
        images = proj.project_image_table(&images, PROJECTED_SPACE)?;
    }

    let seeds: Vec<u64> = (0..cfg.seeds as u64).map(|i| cfg.seed.wrapping_add(i)).collect();
    let ns: std::collections::BTreeSet<usize> = cfg.distractors.iter().copied().collect();
    let grid: Vec<(usize, u64)> = ns.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    ctx.progress(format!("running {} retrieval settings over {} pairs", grid.len(), pairs.len()));
    let accuracies = grid
        .par_iter()
        .map(|&(n, s)| retrieval_accuracy(&captions, &images, &pairs, n, s))
        .collect::<aec_core::Result<Vec<f64>>>()?;
    let mut per_seed: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (&(n, _), acc) in grid.iter().zip(accuracies) {
        per_seed.entry(n).or_default().push(acc);
    }
    let curve = RetrievalCurve::from_per_seed(seeds.clone(), pairs.len(), per_seed);

    out.write_csv(
        "curve.csv",
        &header,
        &["n", "mean", "std", "seeds", "chance"],
        curve.points.iter().map(|p| {
            [
                p.distractors.to_string(),
                num(p.mean),
                num(p.std),
                seeds.len().to_string(),
                num(1.0 / (p.distractors as f64 + 1.0)),
            ]
        }),
    )?;
    let images_in_pool = pairs.iter().map(|(_, i)| i.as_str()).collect::<std::collections::BTreeSet<_>>().len();
    let summary = ListenSummary {
        pairs: pairs.len(),
        images: images_in_pool,
        space_tag: captions.space_tag().into(),
        projection: projection_summary,
        curve,
    };
    out.write_json("listen.json", &header, &summary)?;
    for p in &summary.curve.points {
        ctx.progress(format!("n={}: {:.4} ± {:.4}", p.distractors, p.mean, p.std));
    }
    Ok(())
}
