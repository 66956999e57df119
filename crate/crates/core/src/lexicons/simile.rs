use alloc::string::String;
use alloc::vec::Vec;

use super::parse_terms;
use crate::text::tokenize;
use crate::{Error, Result};

pub const DEFAULT_SIMILE_PHRASES: [&str; 7] =
    ["looks like", "look like", "thinking of", "reminds me", "as if", "seems like", "seem like"];

/// Lowercase trigger phrases, stored tokenized.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilePhraseList {
    phrases: Vec<Vec<String>>,
}

impl SimilePhraseList {
    pub fn new<S: AsRef<str>>(phrases: &[S]) -> Result<Self> {
        let phrases: Vec<Vec<String>> =
            phrases.iter().map(|p| tokenize(p.as_ref())).filter(|t| !t.is_empty()).collect();
        if phrases.is_empty() {
            return Err(Error::Empty("simile phrase list"));
        }
        Ok(Self { phrases })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(&parse_terms(text))
    }

    pub fn phrases(&self) -> &[Vec<String>] {
        &self.phrases
    }
}

impl Default for SimilePhraseList {
    fn default() -> Self {
        Self::new(&DEFAULT_SIMILE_PHRASES).expect("default phrases are nonempty")
    }
}

/// True iff some phrase occurs as a contiguous, case-insensitive token run.
pub fn detect_simile<S: AsRef<str>>(tokens: &[S], phrases: &SimilePhraseList) -> bool {
    let lowered: Vec<String> = tokens.iter().map(|t| t.as_ref().to_lowercase()).collect();
    phrases.phrases.iter().any(|p| lowered.windows(p.len()).any(|w| w == p.as_slice()))
}
