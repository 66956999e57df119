use serde::{Deserialize, Serialize};

use super::AnnotationCorpus;
use crate::{Error, Result};

pub const DEFAULT_MIN_TOKENS: usize = 5;
pub const DEFAULT_MAX_TOKENS: usize = 51;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreprocessStats {
    pub input_records: usize,
    pub kept_records: usize,
    pub removed_too_short: usize,
    pub removed_too_long: usize,
    pub removed_fraction: f64,
}

/// Drop explanations whose token count lies outside `[min_tokens, max_tokens]`.
///
/// Counts are taken after tokenization (punctuation tokens included).
pub fn preprocess(
    corpus: &AnnotationCorpus,
    min_tokens: usize,
    max_tokens: usize,
) -> Result<(AnnotationCorpus, PreprocessStats)> {
    if min_tokens < 1 || max_tokens < min_tokens {
        return Err(Error::InvalidArgument(alloc::format!(
            "token bounds must satisfy 1 <= min <= max, got [{min_tokens}, {max_tokens}]"
        )));
    }
    let (mut short, mut long) = (0, 0);
    let kept = corpus.filter(|r| {
        let n = r.tokens.len();
        if n < min_tokens {
            short += 1;
            false
        } else if n > max_tokens {
            long += 1;
            false
        } else {
            true
        }
    });
    let input = corpus.len();
    let stats = PreprocessStats {
        input_records: input,
        kept_records: kept.len(),
        removed_too_short: short,
        removed_too_long: long,
        removed_fraction: if input == 0 { 0.0 } else { (short + long) as f64 / input as f64 },
    };
    Ok((kept, stats))
}
