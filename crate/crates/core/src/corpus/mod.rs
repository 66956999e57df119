//! Annotation corpora and the embedding-driven dataset construction steps.

mod dedup;
mod embedding;
mod neighbors;
mod preprocess;
mod record;
mod split;
mod vocab;

pub use dedup::deduplicate;
pub use embedding::{EmbeddingTable, EmbeddingVector};
pub use neighbors::select_seed_neighbors;
pub use preprocess::{preprocess, PreprocessStats, DEFAULT_MAX_TOKENS, DEFAULT_MIN_TOKENS};
pub use record::{AnnotationCorpus, AnnotationRecord, SourceDataset};
pub use split::{split, Split, SplitAssignment, DEFAULT_RATIOS};
pub use vocab::{build_vocabulary, Vocabulary, DEFAULT_MIN_COUNT};

#[cfg(test)]
pub(crate) use record::fixtures;
