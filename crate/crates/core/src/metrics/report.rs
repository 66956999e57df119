use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::affect::{emotional_alignment, simile_fraction};
use super::diversity::{lcs_subsample, max_lcs, unique_fraction, DEFAULT_LCS_SAMPLE};
use super::embedding::{clip_div_cos, clip_score, group_reference_ids, ref_clip_score};
use super::overlap::{bleu, bleu_counts, rouge_l, BleuCounts, MAX_BLEU_ORDER, ROUGE_BETA};
use crate::classifiers::EmotionPredictor;
use crate::corpus::{AnnotationCorpus, EmbeddingTable};
use crate::lexicons::SimilePhraseList;
use crate::text::tokenize;
use crate::{EmotionLabel, Error, Measured, Result};

/// One produced caption.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub image_id: String,
    pub text: String,
    #[serde(default)]
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text_embedding_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emotion: Option<EmotionLabel>,
}

impl GenerationRecord {
    pub fn new(image_id: impl Into<String>, text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        let record =
            Self { image_id: image_id.into(), tokens: tokenize(&text), text, text_embedding_id: None, emotion: None };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tokens.is_empty() {
            return Err(Error::InvalidRecord(format!("generation for image {:?} has no tokens", self.image_id)));
        }
        Ok(())
    }

    /// Text embedding id, defaulting to the image id.
    pub fn embedding_id(&self) -> &str {
        self.text_embedding_id.as_deref().unwrap_or(&self.image_id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Smoothing for the sentence-averaged BLEU columns.
    pub bleu_smoothing: bool,
    /// Number of training utterances sampled for Max-LCS.
    pub lcs_sample_size: usize,
    pub lcs_seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self { bleu_smoothing: true, lcs_sample_size: DEFAULT_LCS_SAMPLE, lcs_seed: 0 }
    }
}

impl EvalConfig {
    /// Stable hex digest (FNV-1a) of every setting that affects the numbers.
    pub fn fingerprint(&self) -> String {
        let canonical = format!(
            "bleu_smoothing={};lcs_sample_size={};lcs_seed={};rouge_beta={};clip_weight={}",
            self.bleu_smoothing,
            self.lcs_sample_size,
            self.lcs_seed,
            ROUGE_BETA,
            super::CLIP_WEIGHT
        );
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for b in canonical.bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{hash:016x}")
    }
}

/// Everything [`evaluate_all`] may use. Absent inputs make the dependent
/// metrics unavailable.
#[derive(Clone, Copy)]
pub struct EvalInputs<'a> {
    pub generations: &'a [GenerationRecord],
    /// Human explanations of the evaluated images.
    pub references: Option<&'a AnnotationCorpus>,
    /// Training explanations for Max-LCS.
    pub training: Option<&'a AnnotationCorpus>,
    pub text_embeddings: Option<&'a EmbeddingTable>,
    pub image_embeddings: Option<&'a EmbeddingTable>,
    /// Reference caption embeddings with ids `"<image>#<k>"`.
    pub reference_embeddings: Option<&'a EmbeddingTable>,
    pub classifier: Option<&'a dyn EmotionPredictor>,
    pub majority: Option<&'a BTreeMap<String, EmotionLabel>>,
    pub similes: &'a SimilePhraseList,
}

impl<'a> EvalInputs<'a> {
    pub fn new(generations: &'a [GenerationRecord], similes: &'a SimilePhraseList) -> Self {
        Self {
            generations,
            references: None,
            training: None,
            text_embeddings: None,
            image_embeddings: None,
            reference_embeddings: None,
            classifier: None,
            majority: None,
            similes,
        }
    }
}

/// Column names of [`MetricReport::table_row`].
pub const TABLE_COLUMNS: [&str; 14] = [
    "BLEU-1",
    "BLEU-2",
    "BLEU-3",
    "BLEU-4",
    "METEOR",
    "ROUGE-L",
    "SPICE",
    "CLIPScore",
    "RefCLIPScore",
    "Unique-Productions",
    "Max-LCS",
    "CLIP-Cosine",
    "Similes",
    "Emo-Alignment",
];

/// The metric battery for one generation set. Values are ×100.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub generations: usize,
    /// Sentence-level BLEU-1..4 averaged over generations.
    pub bleu: [Measured<f64>; MAX_BLEU_ORDER],
    /// Corpus-level BLEU-1..4 (unsmoothed).
    pub corpus_bleu: [Measured<f64>; MAX_BLEU_ORDER],
    pub meteor: Measured<f64>,
    pub rouge_l: Measured<f64>,
    pub spice: Measured<f64>,
    pub clip_score: Measured<f64>,
    pub ref_clip_score: Measured<f64>,
    pub unique: Measured<f64>,
    pub max_lcs: Measured<f64>,
    /// Mean raw LCS length in tokens.
    pub max_lcs_tokens: Measured<f64>,
    pub clip_cosine: Measured<f64>,
    pub similes: Measured<f64>,
    pub emo_alignment: Measured<f64>,
    /// Number of generations each metric was computed over.
    pub support: BTreeMap<String, usize>,
    pub config: EvalConfig,
    pub fingerprint: String,
}

impl MetricReport {
    /// Values in [`TABLE_COLUMNS`] order.
    pub fn table_row(&self) -> [&Measured<f64>; 14] {
        [
            &self.bleu[0],
            &self.bleu[1],
            &self.bleu[2],
            &self.bleu[3],
            &self.meteor,
            &self.rouge_l,
            &self.spice,
            &self.clip_score,
            &self.ref_clip_score,
            &self.unique,
            &self.max_lcs,
            &self.clip_cosine,
            &self.similes,
            &self.emo_alignment,
        ]
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn measured_from<T>(result: Result<T>) -> Measured<T> {
    match result {
        Ok(v) => Measured::Available(v),
        Err(e) => Measured::Unavailable(format!("{e}")),
    }
}

struct Overlap {
    bleu: [f64; MAX_BLEU_ORDER],
    corpus: [f64; MAX_BLEU_ORDER],
    rouge: f64,
    support: usize,
}

fn overlap(gens: &[GenerationRecord], refs: &AnnotationCorpus, smoothing: bool) -> Result<Overlap> {
    let mut sentence = [0.0; MAX_BLEU_ORDER];
    let mut total = BleuCounts::default();
    let mut rouge = 0.0;
    let mut support = 0;
    for g in gens {
        let references: Vec<&[String]> = refs.image_records(&g.image_id).map(|r| r.tokens.as_slice()).collect();
        if references.is_empty() {
            continue;
        }
        support += 1;
        for (n, s) in sentence.iter_mut().enumerate() {
            *s += bleu(&g.tokens, &references, n + 1, smoothing)?;
        }
        total.merge(&bleu_counts(&g.tokens, &references)?);
        rouge += rouge_l(&g.tokens, &references)?;
    }
    if support == 0 {
        return Err(Error::Empty("generations with human references"));
    }
    let k = support as f64;
    let mut corpus = [0.0; MAX_BLEU_ORDER];
    for (n, c) in corpus.iter_mut().enumerate() {
        *c = 100.0 * total.score(n + 1, false);
    }
    Ok(Overlap { bleu: sentence.map(|s| 100.0 * s / k), corpus, rouge: 100.0 * rouge / k, support })
}

struct Clip {
    score: f64,
    support: usize,
}

fn clip(gens: &[GenerationRecord], text: &EmbeddingTable, images: &EmbeddingTable) -> Result<Clip> {
    text.check_compatible(images)?;
    let scores = gens
        .iter()
        .map(|g| clip_score(text.require(g.embedding_id())?, images.require(&g.image_id)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Clip { score: 100.0 * mean(&scores), support: scores.len() })
}

fn ref_clip(
    gens: &[GenerationRecord],
    text: &EmbeddingTable,
    images: &EmbeddingTable,
    references: &EmbeddingTable,
) -> Result<Clip> {
    text.check_compatible(images)?;
    text.check_compatible(references)?;
    let groups = group_reference_ids(references);
    let mut scores = Vec::with_capacity(gens.len());
    for g in gens {
        let refs: Vec<&[f32]> = groups
            .get(&g.image_id)
            .ok_or_else(|| Error::MissingEmbedding(format!("{}#*", g.image_id)))?
            .iter()
            .map(|&row| references.row(row))
            .collect();
        scores.push(ref_clip_score(text.require(g.embedding_id())?, images.require(&g.image_id)?, &refs)?);
    }
    Ok(Clip { score: 100.0 * mean(&scores), support: scores.len() })
}

fn unsupported(name: &str) -> Measured<f64> {
    Measured::Unsupported(format!("{name} needs external resources and is not computed"))
}

fn missing(what: &str) -> Measured<f64> {
    Measured::unavailable(format!("no {what} supplied"))
}

/// Compute every metric whose inputs are present.
pub fn evaluate_all(inputs: &EvalInputs<'_>, config: EvalConfig) -> Result<MetricReport> {
    let gens = inputs.generations;
    if gens.is_empty() {
        return Err(Error::Empty("generations"));
    }
    gens.iter().try_for_each(GenerationRecord::validate)?;
    let mut support = BTreeMap::new();
    let n = gens.len();

    let (bleu_cols, corpus_cols, rouge) = match inputs.references.map(|r| overlap(gens, r, config.bleu_smoothing)) {
        None => ([0; 4].map(|_| missing("references")), [0; 4].map(|_| missing("references")), missing("references")),
        Some(Err(e)) => {
            let m = || Measured::Unavailable(format!("{e}"));
            ([0; 4].map(|_| m()), [0; 4].map(|_| m()), m())
        }
        Some(Ok(o)) => {
            support.insert("bleu".into(), o.support);
            support.insert("rouge_l".into(), o.support);
            (o.bleu.map(Measured::Available), o.corpus.map(Measured::Available), Measured::Available(o.rouge))
        }
    };

    let embeddings = inputs.text_embeddings.zip(inputs.image_embeddings);
    let clip_col = match embeddings {
        None => missing("text and image embeddings"),
        Some((t, i)) => measured_from(clip(gens, t, i)).map(|c| {
            support.insert("clip_score".into(), c.support);
            c.score
        }),
    };
    let ref_clip_col = match (embeddings, inputs.reference_embeddings) {
        (Some((t, i)), Some(r)) => measured_from(ref_clip(gens, t, i, r)).map(|c| {
            support.insert("ref_clip_score".into(), c.support);
            c.score
        }),
        _ => missing("text, image and reference embeddings"),
    };
    let cosine_col = match inputs.text_embeddings {
        None => missing("text embeddings"),
        Some(t) => measured_from(
            gens.iter()
                .map(|g| t.require(g.embedding_id()))
                .collect::<Result<Vec<&[f32]>>>()
                .and_then(|e| clip_div_cos(&e)),
        )
        .map(|c| {
            support.insert("clip_cosine".into(), n);
            100.0 * c
        }),
    };

    let texts: Vec<&str> = gens.iter().map(|g| g.text.as_str()).collect();
    let unique_col = measured_from(unique_fraction(&texts));
    support.insert("unique".into(), n);

    let (lcs_col, lcs_tokens_col) = match inputs.training {
        None => (missing("training corpus"), missing("training corpus")),
        Some(train) => {
            let records = train.records();
            let sample: Vec<&[String]> = lcs_subsample(records.len(), config.lcs_sample_size, config.lcs_seed)
                .into_iter()
                .map(|i| records[i].tokens.as_slice())
                .collect();
            match gens.iter().map(|g| max_lcs(&g.tokens, &sample)).collect::<Result<Vec<_>>>() {
                Err(e) => (Measured::Unavailable(format!("{e}")), Measured::Unavailable(format!("{e}"))),
                Ok(values) => {
                    support.insert("max_lcs".into(), n);
                    let pct: Vec<f64> = values.iter().map(|v| v.percent).collect();
                    let len: Vec<f64> = values.iter().map(|v| v.length as f64).collect();
                    (Measured::Available(mean(&pct)), Measured::Available(mean(&len)))
                }
            }
        }
    };

    let token_lists: Vec<&[String]> = gens.iter().map(|g| g.tokens.as_slice()).collect();
    let simile_col = Measured::Available(simile_fraction(&token_lists, inputs.similes));
    support.insert("similes".into(), n);

    let emo_col = match (inputs.classifier, inputs.majority) {
        (Some(clf), Some(majority)) => measured_from(emotional_alignment(
            gens.iter().map(|g| (g.image_id.as_str(), g.tokens.as_slice())),
            &clf,
            majority,
        ))
        .map(|a| {
            support.insert("emo_alignment".into(), a.support);
            a.percent
        }),
        _ => missing("emotion classifier and majority labels"),
    };

    Ok(MetricReport {
        generations: n,
        bleu: bleu_cols,
        corpus_bleu: corpus_cols,
        meteor: unsupported("METEOR"),
        rouge_l: rouge,
        spice: unsupported("SPICE"),
        clip_score: clip_col,
        ref_clip_score: ref_clip_col,
        unique: unique_col,
        max_lcs: lcs_col,
        max_lcs_tokens: lcs_tokens_col,
        clip_cosine: cosine_col,
        similes: simile_col,
        emo_alignment: emo_col,
        support,
        config,
        fingerprint: config.fingerprint(),
    })
}
