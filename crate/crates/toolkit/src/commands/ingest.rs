use std::collections::BTreeSet;
use std::path::PathBuf;

use aec_core::corpus::{
    build_vocabulary, deduplicate, preprocess, select_seed_neighbors, split, PreprocessStats, Split,
    DEFAULT_MAX_TOKENS, DEFAULT_MIN_COUNT, DEFAULT_MIN_TOKENS, DEFAULT_RATIOS,
};
use clap::Args;
use serde::{Deserialize, Serialize};

use super::{is_false, out_dir, Context};
use crate::config::required;
use crate::error::CliError;
use crate::header::Header;
use crate::io::annotations::{annotation_lines, load_annotations, OnError, SkippedLine};
use crate::io::embeddings::load_embeddings;

/// Load annotations, filter, deduplicate and split them.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct IngestArgs {
    /// Annotation line-JSON file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotations: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Skip malformed lines instead of failing.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub skip_invalid: bool,
    /// Minimum tokens per explanation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_tokens: Option<usize>,
    /// Maximum tokens per explanation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<usize>,
    /// Minimum training-split count for a vocabulary token.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_count: Option<usize>,
    /// Train, val and test fractions.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Vec<f64>>,
    /// Image embeddings used for deduplication.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image_emb: Option<PathBuf>,
    /// Euclidean distance at or below which two images are duplicates.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dedup_eps: Option<f64>,
    /// Query image embeddings for nearest-neighbor selection.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub queries: Option<PathBuf>,
    /// Pool image embeddings for nearest-neighbor selection.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pool: Option<PathBuf>,
    /// Neighbors per query.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IngestConfig {
    pub annotations: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub skip_invalid: bool,
    pub min_tokens: usize,
    pub max_tokens: usize,
    pub min_count: usize,
    pub ratios: [f64; 3],
    pub seed: u64,
    pub image_emb: Option<PathBuf>,
    pub dedup_eps: Option<f64>,
    pub queries: Option<PathBuf>,
    pub pool: Option<PathBuf>,
    pub k: usize,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            annotations: None,
            out: None,
            skip_invalid: false,
            min_tokens: DEFAULT_MIN_TOKENS,
            max_tokens: DEFAULT_MAX_TOKENS,
            min_count: DEFAULT_MIN_COUNT,
            ratios: DEFAULT_RATIOS,
            seed: 0,
            image_emb: None,
            dedup_eps: None,
            queries: None,
            pool: None,
            k: 3,
        }
    }
}

#[derive(Debug, Serialize)]
struct DedupSummary {
    epsilon: f64,
    groups: Vec<Vec<String>>,
    removed_images: Vec<String>,
    removed_records: usize,
}

#[derive(Debug, Serialize)]
struct NeighborSummary {
    k: usize,
    queries: usize,
    selected: usize,
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    loaded_records: usize,
    skipped_lines: Vec<SkippedLine>,
    dedup: Option<DedupSummary>,
    preprocess: PreprocessStats,
    images: usize,
    split_images: [usize; 3],
    split_records: [usize; 3],
    vocabulary: usize,
    neighbors: Option<NeighborSummary>,
}

pub fn run(cfg: &IngestConfig, ctx: &Context) -> Result<(), CliError> {
    let annotations = required(&cfg.annotations, "annotations")?;
    if cfg.dedup_eps.is_some() != cfg.image_emb.is_some() {
        return Err(CliError::usage("--dedup-eps and --image-emb must be given together"));
    }
    if cfg.queries.is_some() != cfg.pool.is_some() {
        return Err(CliError::usage("--queries and --pool must be given together"));
    }
    let mut out = out_dir(&cfg.out)?;
    let header = Header::new("ingest", cfg);

    let policy = if cfg.skip_invalid { OnError::Skip } else { OnError::Fail };
    let loaded = load_annotations(annotations, policy)?;
    ctx.progress(format!("loaded {} records ({} lines skipped)", loaded.corpus.len(), loaded.skipped.len()));
    let mut corpus = loaded.corpus;
    let loaded_records = corpus.len();

    let dedup = match (&cfg.image_emb, cfg.dedup_eps) {
        (Some(path), Some(epsilon)) => {
            let table = load_embeddings(path)?;
            let images: BTreeSet<&str> = corpus.image_ids().collect();
            let groups = deduplicate(&table, epsilon)?;
            let mut removed_images = Vec::new();
            for group in &groups {
                let mut present: Vec<&String> = group.iter().filter(|id| images.contains(id.as_str())).collect();
                present.sort();
                removed_images.extend(present.into_iter().skip(1).cloned());
            }
            removed_images.sort();
            let drop: BTreeSet<&str> = removed_images.iter().map(String::as_str).collect();
            let before = corpus.len();
            corpus = corpus.filter(|r| !drop.contains(r.image_id.as_str()));
            ctx.progress(format!("dedup removed {} images", removed_images.len()));
            Some(DedupSummary { epsilon, groups, removed_records: before - corpus.len(), removed_images })
        }
        _ => None,
    };

    let (corpus, stats) = preprocess(&corpus, cfg.min_tokens, cfg.max_tokens)?;
    let assignment = split(&corpus, cfg.ratios, cfg.seed)?;
    let subsets: Vec<_> = Split::ALL.iter().map(|&s| assignment.subset(&corpus, s)).collect();
    let vocab = build_vocabulary(&subsets[0], cfg.min_count)?;

    let neighbors = match (&cfg.queries, &cfg.pool) {
        (Some(q), Some(p)) => {
            if cfg.k == 0 {
                return Err(CliError::usage("--k must be at least 1"));
            }
            let queries = load_embeddings(q)?;
            let pool = load_embeddings(p)?;
            let selected = select_seed_neighbors(&queries, &pool, cfg.k)?;
            out.write_lines("neighbors.txt", &header, selected.iter().cloned())?;
            Some(NeighborSummary { k: cfg.k, queries: queries.len(), selected: selected.len() })
        }
        _ => None,
    };

    out.write_jsonl("corpus.jsonl", &header, annotation_lines(&corpus))?;
    for (s, subset) in Split::ALL.iter().zip(&subsets) {
        out.write_jsonl(&format!("{}.jsonl", s.as_str()), &header, annotation_lines(subset))?;
    }
    out.write_csv(
        "splits.csv",
        &header,
        &["image_id", "split"],
        assignment.assignment.iter().map(|(id, s)| [id.clone(), s.as_str().to_string()]),
    )?;
    out.write_lines("vocab.txt", &header, vocab.tokens().iter().cloned())?;
    let summary = IngestSummary {
        loaded_records,
        skipped_lines: loaded.skipped,
        dedup,
        preprocess: stats,
        images: corpus.num_images(),
        split_images: assignment.sizes(),
        split_records: [subsets[0].len(), subsets[1].len(), subsets[2].len()],
        vocabulary: vocab.len(),
        neighbors,
    };
    out.write_json("ingest.json", &header, &summary)?;
    ctx.progress(format!(
        "kept {} records over {} images; vocabulary {}",
        corpus.len(),
        corpus.num_images(),
        vocab.len()
    ));
    Ok(())
}
