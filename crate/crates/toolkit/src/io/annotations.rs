//! Annotation line-JSON: one record per line.

use std::path::Path;

use aec_core::corpus::{AnnotationCorpus, AnnotationRecord, SourceDataset};
use aec_core::EmotionLabel;
use serde::{Deserialize, Serialize};

use super::{is_header_line, read_to_string};
use crate::error::FormatError;

/// The on-disk shape of one annotation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotationLine {
    pub image_id: String,
    pub source: String,
    pub emotion: String,
    pub explanation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tokens: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotator_id: Option<String>,
}

impl AnnotationLine {
    pub fn from_record(r: &AnnotationRecord) -> Self {
        Self {
            image_id: r.image_id.clone(),
            source: r.source.as_str().into(),
            emotion: r.emotion.as_str().into(),
            explanation: r.explanation.clone(),
            tokens: Some(r.tokens.clone()),
            pos: r.pos_tags.clone(),
            annotator_id: r.annotator_id.clone(),
        }
    }

    pub fn into_record(self) -> aec_core::Result<AnnotationRecord> {
        let source: SourceDataset = self.source.parse()?;
        let emotion: EmotionLabel = self.emotion.parse()?;
        AnnotationRecord::new(
            self.image_id,
            source,
            emotion,
            self.explanation,
            self.tokens,
            self.pos,
            self.annotator_id,
        )
    }
}

/// What to do with a malformed line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OnError {
    #[default]
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct LoadedAnnotations {
    pub corpus: AnnotationCorpus,
    pub skipped: Vec<SkippedLine>,
}

pub fn load_annotations(path: &Path, on_error: OnError) -> Result<LoadedAnnotations, FormatError> {
    let text = read_to_string(path)?;
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<serde_json::Value>(line).map_err(|e| e.to_string()).and_then(|v| {
            if is_header_line(&v) {
                return Ok(None);
            }
            let raw: AnnotationLine = serde_json::from_value(v).map_err(|e| e.to_string())?;
            raw.into_record().map(Some).map_err(|e| e.to_string())
        });
        match parsed {
            Ok(Some(record)) => records.push(record),
            Ok(None) => {}
            Err(reason) => match on_error {
                OnError::Fail => {
                    return Err(FormatError::Line { path: path.display().to_string(), line: i + 1, message: reason });
                }
                OnError::Skip => skipped.push(SkippedLine { line: i + 1, reason }),
            },
        }
    }
    let corpus = AnnotationCorpus::new(records)?;
    Ok(LoadedAnnotations { corpus, skipped })
}

pub fn annotation_lines(corpus: &AnnotationCorpus) -> impl Iterator<Item = AnnotationLine> + '_ {
    corpus.records().iter().map(AnnotationLine::from_record)
}
