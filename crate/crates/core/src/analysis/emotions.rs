use alloc::collections::BTreeMap;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::corpus::AnnotationCorpus;
use crate::emotion::NUM_EMOTIONS;
use crate::{EmotionLabel, Error, Result, Valence};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionHistogram {
    pub total: u64,
    pub counts: BTreeMap<EmotionLabel, u64>,
    pub fractions: BTreeMap<EmotionLabel, f64>,
    pub positive: f64,
    pub negative: f64,
    pub something_else: f64,
}

impl EmotionHistogram {
    pub fn fraction(&self, label: EmotionLabel) -> f64 {
        self.fractions[&label]
    }
}

fn label_counts<'a>(labels: impl Iterator<Item = EmotionLabel> + 'a) -> [u64; NUM_EMOTIONS] {
    let mut counts = [0u64; NUM_EMOTIONS];
    for label in labels {
        counts[label.index()] += 1;
    }
    counts
}

/// Label frequencies over all records, with the valence roll-up.
pub fn emotion_distribution(corpus: &AnnotationCorpus) -> Result<EmotionHistogram> {
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let counts = label_counts(corpus.records().iter().map(|r| r.emotion));
    let total = corpus.len() as u64;
    let frac = |c: u64| c as f64 / total as f64;
    let mut rollup = [0u64; 3];
    for label in EmotionLabel::ALL {
        let slot = match label.valence() {
            Some(Valence::Positive) => 0,
            Some(Valence::Negative) => 1,
            None => 2,
        };
        rollup[slot] += counts[label.index()];
    }
    Ok(EmotionHistogram {
        total,
        counts: EmotionLabel::ALL.iter().map(|&l| (l, counts[l.index()])).collect(),
        fractions: EmotionLabel::ALL.iter().map(|&l| (l, frac(counts[l.index()]))).collect(),
        positive: frac(rollup[0]),
        negative: frac(rollup[1]),
        something_else: frac(rollup[2]),
    })
}

/// When does one label count as the majority of an image's annotations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorityRule {
    /// Fraction of the image's annotations the label must reach.
    pub threshold: f64,
    /// `true`: strictly more than `threshold`; `false`: at least `threshold`.
    pub strict: bool,
}

impl Default for MajorityRule {
    fn default() -> Self {
        Self { threshold: 0.5, strict: true }
    }
}

impl MajorityRule {
    pub fn holds(&self, count: u64, total: u64) -> bool {
        let needed = self.threshold * total as f64;
        if self.strict {
            count as f64 > needed
        } else {
            count as f64 >= needed
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementStats {
    pub rule: MajorityRule,
    pub images: usize,
    pub strong_majority_images: usize,
    pub strong_majority_fraction: f64,
    /// Strong-majority images whose top label is the unique argmax.
    pub unique_strong_majority_images: usize,
    /// Strong-majority images excluded because several labels tie for the top.
    pub tied_majority_images: usize,
    pub mixed_valence_images: usize,
    pub mixed_valence_fraction: f64,
    /// Label of each unique strong majority, counted per label.
    pub composition: BTreeMap<EmotionLabel, u64>,
    pub composition_fractions: BTreeMap<EmotionLabel, f64>,
}

enum Majority {
    None,
    Unique(EmotionLabel),
    Tied,
}

fn image_majority(counts: &[u64; NUM_EMOTIONS], total: u64, rule: &MajorityRule) -> Majority {
    let top = *counts.iter().max().unwrap_or(&0);
    if total == 0 || !rule.holds(top, total) {
        return Majority::None;
    }
    let mut winners = EmotionLabel::ALL.iter().filter(|l| counts[l.index()] == top);
    let first = *winners.next().expect("max exists");
    if winners.next().is_some() {
        Majority::Tied
    } else {
        Majority::Unique(first)
    }
}

/// Per-image agreement statistics.
pub fn majority_stats(corpus: &AnnotationCorpus, rule: MajorityRule) -> Result<AgreementStats> {
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let mut strong = 0;
    let mut tied = 0;
    let mut mixed = 0;
    let mut composition = [0u64; NUM_EMOTIONS];
    for (_, records) in corpus.images() {
        let counts = label_counts(records.iter().map(|r| r.emotion));
        let total = records.len() as u64;
        match image_majority(&counts, total, &rule) {
            Majority::None => {}
            Majority::Unique(label) => {
                strong += 1;
                composition[label.index()] += 1;
            }
            Majority::Tied => {
                strong += 1;
                tied += 1;
            }
        }
        let has = |v: Valence| EmotionLabel::ALL.iter().any(|l| l.valence() == Some(v) && counts[l.index()] > 0);
        if has(Valence::Positive) && has(Valence::Negative) {
            mixed += 1;
        }
    }
    let images = corpus.num_images();
    let unique = strong - tied;
    Ok(AgreementStats {
        rule,
        images,
        strong_majority_images: strong,
        strong_majority_fraction: strong as f64 / images as f64,
        unique_strong_majority_images: unique,
        tied_majority_images: tied,
        mixed_valence_images: mixed,
        mixed_valence_fraction: mixed as f64 / images as f64,
        composition: EmotionLabel::ALL.iter().map(|&l| (l, composition[l.index()])).collect(),
        composition_fractions: EmotionLabel::ALL
            .iter()
            .map(|&l| {
                let f = if unique == 0 { 0.0 } else { composition[l.index()] as f64 / unique as f64 };
                (l, f)
            })
            .collect(),
    })
}

/// Image id → label for every image with a unique strong majority.
pub fn strong_majority_labels(corpus: &AnnotationCorpus, rule: MajorityRule) -> BTreeMap<String, EmotionLabel> {
    corpus
        .images()
        .filter_map(|(id, records)| {
            let counts = label_counts(records.iter().map(|r| r.emotion));
            match image_majority(&counts, records.len() as u64, &rule) {
                Majority::Unique(label) => Some((String::from(id), label)),
                _ => None,
            }
        })
        .collect()
}
