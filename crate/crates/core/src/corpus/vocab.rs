use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::AnnotationCorpus;
use crate::{Error, Result};

pub const DEFAULT_MIN_COUNT: usize = 2;

/// Dense token ids with four reserved symbols at ids 0..=3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    tokens: Vec<String>,
    #[serde(skip)]
    ids: BTreeMap<String, u32>,
    min_count: usize,
}

impl Vocabulary {
    pub const PAD: &'static str = "<pad>";
    pub const START: &'static str = "<sos>";
    pub const END: &'static str = "<eos>";
    pub const UNK: &'static str = "<unk>";
    pub const PAD_ID: u32 = 0;
    pub const START_ID: u32 = 1;
    pub const END_ID: u32 = 2;
    pub const UNK_ID: u32 = 3;
    const RESERVED: [&'static str; 4] = [Self::PAD, Self::START, Self::END, Self::UNK];

    /// Rebuild from an id-ordered token list whose first four entries are the
    /// reserved symbols.
    pub fn from_tokens(tokens: Vec<String>, min_count: usize) -> Result<Self> {
        if tokens.len() < 4 || tokens[..4].iter().zip(Self::RESERVED).any(|(a, b)| a != b) {
            return Err(Error::InvalidArgument("vocabulary must start with the reserved symbols".to_string()));
        }
        let mut ids = BTreeMap::new();
        for (i, t) in tokens.iter().enumerate() {
            if ids.insert(t.clone(), i as u32).is_some() {
                return Err(Error::DuplicateId(t.clone()));
            }
        }
        Ok(Self { tokens, ids, min_count })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_count(&self) -> usize {
        self.min_count
    }

    /// Id-ordered tokens, reserved symbols first.
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.ids.get(token).copied()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.ids.get(token).is_some_and(|&id| id > Self::UNK_ID)
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    /// Map tokens to ids, substituting the unknown id for anything unseen.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<u32> {
        tokens
            .iter()
            .map(|t| match self.ids.get(t.as_ref()) {
                Some(&id) if id > Self::UNK_ID => id,
                _ => Self::UNK_ID,
            })
            .collect()
    }
}

/// Keep every token seen at least `min_count` times. Real tokens get ids in
/// ascending lexicographic order after the reserved symbols.
pub fn build_vocabulary(corpus: &AnnotationCorpus, min_count: usize) -> Result<Vocabulary> {
    if min_count < 1 {
        return Err(Error::InvalidArgument("min_count must be >= 1".to_string()));
    }
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for record in corpus.records() {
        for token in &record.tokens {
            *counts.entry(token.as_str()).or_default() += 1;
        }
    }
    let mut tokens: Vec<String> = Vocabulary::RESERVED.iter().map(|s| s.to_string()).collect();
    tokens.extend(
        counts
            .into_iter()
            .filter(|&(t, c)| c >= min_count && !Vocabulary::RESERVED.contains(&t))
            .map(|(t, _)| t.to_string()),
    );
    Vocabulary::from_tokens(tokens, min_count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::record::fixtures::record;
    use crate::EmotionLabel;
    use alloc::vec;

    fn corpus() -> AnnotationCorpus {
        AnnotationCorpus::new(vec![
            record("a", EmotionLabel::Awe, "the sky is blue"),
            record("b", EmotionLabel::Awe, "the sea is calm zyxq"),
        ])
        .unwrap()
    }

    #[test]
    fn rare_tokens_become_unknown() {
        let vocab = build_vocabulary(&corpus(), 2).unwrap();
        assert!(vocab.contains("the") && vocab.contains("is"));
        assert!(!vocab.contains("zyxq"));
        assert_eq!(vocab.encode(&["the", "zyxq"]), [vocab.id("the").unwrap(), Vocabulary::UNK_ID]);
    }

    #[test]
    fn min_count_one_keeps_everything() {
        let vocab = build_vocabulary(&corpus(), 1).unwrap();
        for t in ["the", "sky", "is", "blue", "sea", "calm", "zyxq"] {
            assert!(vocab.contains(t), "{t}");
        }
        assert_eq!(vocab.len(), 4 + 7);
    }

    #[test]
    fn ids_are_dense_and_reserved_first() {
        let vocab = build_vocabulary(&corpus(), 1).unwrap();
        for (i, t) in vocab.tokens().iter().enumerate() {
            assert_eq!(vocab.id(t), Some(i as u32));
        }
        assert_eq!(vocab.token(Vocabulary::UNK_ID), Some("<unk>"));
    }

    #[test]
    fn errors() {
        assert_eq!(build_vocabulary(&AnnotationCorpus::default(), 2), Err(Error::Empty("corpus")));
        assert!(build_vocabulary(&corpus(), 0).is_err());
    }
}
