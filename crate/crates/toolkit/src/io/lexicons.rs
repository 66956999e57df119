//! Bundled lexicons and file overrides.

use std::path::{Path, PathBuf};

use aec_core::analysis::LexiconSet;
use aec_core::lexicons::{ConcretenessLexicon, SentimentLexicon, SimilePhraseList, SubjectivityLexicon};
use serde::{Deserialize, Serialize};

use super::read_to_string;
use crate::error::FormatError;

pub const CONCRETENESS: &str = include_str!("../../../../data/concreteness.tsv");
pub const SENTIMENT_VALENCE: &str = include_str!("../../../../data/sentiment_valence.tsv");
pub const SENTIMENT_BOOSTERS: &str = include_str!("../../../../data/sentiment_boosters.tsv");
pub const SENTIMENT_NEGATIONS: &str = include_str!("../../../../data/sentiment_negations.tsv");
pub const SUBJECTIVITY: &str = include_str!("../../../../data/subjectivity.tsv");
pub const SIMILE_PHRASES: &str = include_str!("../../../../data/simile_phrases.tsv");

/// Lexicon file overrides; `None` selects the bundled default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconPaths {
    pub concreteness: Option<PathBuf>,
    pub sentiment_valence: Option<PathBuf>,
    pub sentiment_boosters: Option<PathBuf>,
    pub sentiment_negations: Option<PathBuf>,
    pub subjectivity: Option<PathBuf>,
    pub similes: Option<PathBuf>,
}

fn text_or(path: Option<&Path>, bundled: &'static str) -> Result<(String, Option<PathBuf>), FormatError> {
    match path {
        Some(p) => Ok((read_to_string(p)?, Some(p.to_path_buf()))),
        None => Ok((bundled.to_string(), None)),
    }
}

fn parsed<T>(result: aec_core::Result<T>, origin: Option<PathBuf>, name: &str) -> Result<T, FormatError> {
    result.map_err(|e| match origin {
        Some(p) => FormatError::invalid(&p, e.to_string()),
        None => FormatError::Invalid { path: format!("bundled {name}"), message: e.to_string() },
    })
}

impl LexiconPaths {
    pub fn similes(&self) -> Result<SimilePhraseList, FormatError> {
        let (text, origin) = text_or(self.similes.as_deref(), SIMILE_PHRASES)?;
        parsed(SimilePhraseList::parse(&text), origin, "simile phrases")
    }

    pub fn load(&self) -> Result<LexiconSet, FormatError> {
        let (c, c_origin) = text_or(self.concreteness.as_deref(), CONCRETENESS)?;
        let (v, v_origin) = text_or(self.sentiment_valence.as_deref(), SENTIMENT_VALENCE)?;
        let (b, _) = text_or(self.sentiment_boosters.as_deref(), SENTIMENT_BOOSTERS)?;
        let (n, _) = text_or(self.sentiment_negations.as_deref(), SENTIMENT_NEGATIONS)?;
        let (s, s_origin) = text_or(self.subjectivity.as_deref(), SUBJECTIVITY)?;
        Ok(LexiconSet {
            concreteness: parsed(ConcretenessLexicon::parse(&c), c_origin, "concreteness")?,
            sentiment: parsed(SentimentLexicon::parse(&v, &b, &n), v_origin, "sentiment")?,
            subjectivity: parsed(SubjectivityLexicon::parse(&s), s_origin, "subjectivity")?,
            similes: self.similes()?,
        })
    }
}
