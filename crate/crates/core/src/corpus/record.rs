use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::text::{normalize_tokens, tokenize};
use crate::{EmotionLabel, Error, Result};

/// The five public image collections the corpus draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceDataset {
    Coco,
    EmotionalMachines,
    Flickr30k,
    VisualGenome,
    YangAffective,
}

impl SourceDataset {
    pub const ALL: [SourceDataset; 5] = [
        SourceDataset::Coco,
        SourceDataset::EmotionalMachines,
        SourceDataset::Flickr30k,
        SourceDataset::VisualGenome,
        SourceDataset::YangAffective,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SourceDataset::Coco => "coco",
            SourceDataset::EmotionalMachines => "emotional-machines",
            SourceDataset::Flickr30k => "flickr30k",
            SourceDataset::VisualGenome => "visual-genome",
            SourceDataset::YangAffective => "yang-affective",
        }
    }
}

impl fmt::Display for SourceDataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SourceDataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.trim().to_lowercase().chars().filter(|c| c.is_alphanumeric()).collect();
        let source = match key.as_str() {
            "coco" | "mscoco" => SourceDataset::Coco,
            "emotionalmachines" | "emotionalmachinesaffective" | "em" => SourceDataset::EmotionalMachines,
            "flickr30k" | "flickr30kentities" | "flickr30kent" | "flickr30kaffective" => SourceDataset::Flickr30k,
            "visualgenome" | "vg" | "visualgenomeaffective" => SourceDataset::VisualGenome,
            "yangaffective" | "yang" | "youaffective" => SourceDataset::YangAffective,
            _ => return Err(Error::UnknownSource(s.to_string())),
        };
        Ok(source)
    }
}

/// One annotator's emotion indication and explanation for one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub image_id: String,
    pub source: SourceDataset,
    pub emotion: EmotionLabel,
    pub explanation: String,
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos_tags: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotator_id: Option<String>,
}

impl AnnotationRecord {
    /// Build and validate a record. When `tokens` is `None` the explanation
    /// is tokenized; supplied tokens are lowercased.
    pub fn new(
        image_id: impl Into<String>,
        source: SourceDataset,
        emotion: EmotionLabel,
        explanation: impl Into<String>,
        tokens: Option<Vec<String>>,
        pos_tags: Option<Vec<String>>,
        annotator_id: Option<String>,
    ) -> Result<Self> {
        let explanation = explanation.into();
        let tokens = match tokens {
            Some(t) => normalize_tokens(&t),
            None => tokenize(&explanation),
        };
        let record = Self { image_id: image_id.into(), source, emotion, explanation, tokens, pos_tags, annotator_id };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        if self.image_id.is_empty() {
            return Err(Error::InvalidRecord("empty image_id".to_string()));
        }
        if self.tokens.is_empty() {
            return Err(Error::InvalidRecord(alloc::format!("record for image {:?} has no tokens", self.image_id)));
        }
        if let Some(tags) = &self.pos_tags {
            if tags.len() != self.tokens.len() {
                return Err(Error::InvalidRecord(alloc::format!(
                    "record for image {:?} has {} tokens but {} POS tags",
                    self.image_id,
                    self.tokens.len(),
                    tags.len()
                )));
            }
        }
        Ok(())
    }
}

/// Validated records plus an index from image id to record positions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnnotationCorpus {
    records: Vec<AnnotationRecord>,
    images: BTreeMap<String, Vec<usize>>,
}

impl AnnotationCorpus {
    pub fn new(records: Vec<AnnotationRecord>) -> Result<Self> {
        for record in &records {
            record.validate()?;
        }
        Ok(Self::from_valid(records))
    }

    pub(crate) fn from_valid(records: Vec<AnnotationRecord>) -> Self {
        let mut images: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, record) in records.iter().enumerate() {
            images.entry(record.image_id.clone()).or_default().push(i);
        }
        Self { records, images }
    }

    pub fn records(&self) -> &[AnnotationRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<AnnotationRecord> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn num_images(&self) -> usize {
        self.images.len()
    }

    /// Image ids in ascending order.
    pub fn image_ids(&self) -> impl Iterator<Item = &str> {
        self.images.keys().map(String::as_str)
    }

    /// Records of one image, in corpus order.
    pub fn image_records<'a>(&'a self, image_id: &str) -> impl Iterator<Item = &'a AnnotationRecord> {
        self.images.get(image_id).into_iter().flatten().map(move |&i| &self.records[i])
    }

    /// Iterate `(image_id, records)` in ascending image order.
    pub fn images(&self) -> impl Iterator<Item = (&str, Vec<&AnnotationRecord>)> {
        self.images.iter().map(move |(id, idx)| (id.as_str(), idx.iter().map(|&i| &self.records[i]).collect()))
    }

    /// Keep the records for which `keep` returns true.
    pub fn filter(&self, mut keep: impl FnMut(&AnnotationRecord) -> bool) -> Self {
        Self::from_valid(self.records.iter().filter(|r| keep(r)).cloned().collect())
    }

    pub fn has_pos_tags(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.pos_tags.is_some())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn record(image: &str, emotion: EmotionLabel, text: &str) -> AnnotationRecord {
        AnnotationRecord::new(image, SourceDataset::Coco, emotion, text, None, None, None).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::record;
    use super::*;

    #[test]
    fn index_covers_all_records() {
        let corpus = AnnotationCorpus::new(alloc::vec![
            record("a", EmotionLabel::Awe, "a nice view of the sea"),
            record("b", EmotionLabel::Fear, "the dark alley scares me"),
            record("a", EmotionLabel::Contentment, "the calm water relaxes me"),
        ])
        .unwrap();
        assert_eq!(corpus.len(), 3);
        assert_eq!(corpus.num_images(), 2);
        let total: usize = corpus.images().map(|(_, recs)| recs.len()).sum();
        assert_eq!(total, 3);
        assert_eq!(corpus.image_records("a").count(), 2);
    }

    #[test]
    fn rejects_empty_tokens_and_mismatched_tags() {
        let empty = AnnotationRecord::new("a", SourceDataset::Coco, EmotionLabel::Awe, "   ", None, None, None);
        assert!(matches!(empty, Err(Error::InvalidRecord(_))));
        let tags = AnnotationRecord::new(
            "a",
            SourceDataset::Coco,
            EmotionLabel::Awe,
            "two words",
            None,
            Some(alloc::vec!["NOUN".into()]),
            None,
        );
        assert!(matches!(tags, Err(Error::InvalidRecord(_))));
        let no_id = AnnotationRecord::new("", SourceDataset::Coco, EmotionLabel::Awe, "x", None, None, None);
        assert!(no_id.is_err());
    }

    #[test]
    fn source_aliases() {
        assert_eq!("Flickr30k Ent.".parse::<SourceDataset>().unwrap(), SourceDataset::Flickr30k);
        assert_eq!("visual_genome".parse::<SourceDataset>().unwrap(), SourceDataset::VisualGenome);
        assert!("imagenet".parse::<SourceDataset>().is_err());
    }
}
