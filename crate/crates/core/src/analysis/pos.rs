use alloc::collections::BTreeSet;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::corpus::AnnotationCorpus;
use crate::{Error, Result};

/// The five lexical categories tabulated per caption and per image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PosCategory {
    Noun,
    Pronoun,
    Adjective,
    Adposition,
    Verb,
}

impl PosCategory {
    pub const ALL: [PosCategory; 5] =
        [PosCategory::Noun, PosCategory::Pronoun, PosCategory::Adjective, PosCategory::Adposition, PosCategory::Verb];

    /// Accepts Universal Dependencies tags (`NOUN`, `PRON`, `ADJ`, `ADP`,
    /// `VERB`) and Penn Treebank tags (`NN*`, `PRP*`/`WP*`, `JJ*`, `IN`,
    /// `VB*`). Proper nouns and auxiliaries are not counted.
    pub fn from_tag(tag: &str) -> Option<Self> {
        let tag = tag.trim().to_ascii_uppercase();
        let category = match tag.as_str() {
            "NOUN" | "NN" | "NNS" => PosCategory::Noun,
            "PRON" | "PRP" | "PRP$" | "WP" | "WP$" => PosCategory::Pronoun,
            "ADJ" | "JJ" | "JJR" | "JJS" => PosCategory::Adjective,
            "ADP" | "IN" => PosCategory::Adposition,
            "VERB" | "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ" => PosCategory::Verb,
            _ => return None,
        };
        Some(category)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

/// Mean occurrences per caption.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosStatsRow {
    pub words: f64,
    pub nouns: f64,
    pub pronouns: f64,
    pub adjectives: f64,
    pub adpositions: f64,
    pub verbs: f64,
    pub captions: usize,
}

/// Mean distinct words per category per image, raw and divided by the
/// image's number of annotations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosDiversityRow {
    pub raw: [f64; 5],
    pub normalized: [f64; 5],
    pub images: usize,
}

impl PosDiversityRow {
    pub fn raw(&self, category: PosCategory) -> f64 {
        self.raw[category.slot()]
    }

    pub fn normalized(&self, category: PosCategory) -> f64 {
        self.normalized[category.slot()]
    }
}

fn tagged(corpus: &AnnotationCorpus) -> Result<()> {
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    match corpus.records().iter().position(|r| r.pos_tags.is_none()) {
        Some(i) => Err(Error::MissingPosTags(i)),
        None => Ok(()),
    }
}

pub fn pos_stats_per_caption(corpus: &AnnotationCorpus) -> Result<PosStatsRow> {
    tagged(corpus)?;
    let mut counts = [0u64; 5];
    let mut words = 0u64;
    for record in corpus.records() {
        words += record.tokens.len() as u64;
        for tag in record.pos_tags.iter().flatten() {
            if let Some(c) = PosCategory::from_tag(tag) {
                counts[c.slot()] += 1;
            }
        }
    }
    let n = corpus.len() as f64;
    Ok(PosStatsRow {
        words: words as f64 / n,
        nouns: counts[0] as f64 / n,
        pronouns: counts[1] as f64 / n,
        adjectives: counts[2] as f64 / n,
        adpositions: counts[3] as f64 / n,
        verbs: counts[4] as f64 / n,
        captions: corpus.len(),
    })
}

pub fn pos_diversity_per_image(corpus: &AnnotationCorpus) -> Result<PosDiversityRow> {
    tagged(corpus)?;
    let mut raw = [0.0; 5];
    let mut normalized = [0.0; 5];
    for (_, records) in corpus.images() {
        let mut seen: [BTreeSet<&String>; 5] = Default::default();
        for record in &records {
            for (token, tag) in record.tokens.iter().zip(record.pos_tags.iter().flatten()) {
                if let Some(c) = PosCategory::from_tag(tag) {
                    seen[c.slot()].insert(token);
                }
            }
        }
        for (slot, set) in seen.iter().enumerate() {
            raw[slot] += set.len() as f64;
            normalized[slot] += set.len() as f64 / records.len() as f64;
        }
    }
    let images = corpus.num_images();
    for v in raw.iter_mut().chain(normalized.iter_mut()) {
        *v /= images as f64;
    }
    Ok(PosDiversityRow { raw, normalized, images })
}
