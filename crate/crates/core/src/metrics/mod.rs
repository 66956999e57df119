//! Caption evaluation: reference overlap (BLEU, ROUGE-L), embedding scores
//! (CLIPScore, RefCLIPScore), diversity (unique productions, Max-LCS,
//! pairwise CLIP cosine) and affective measures (emotional alignment,
//! simile frequency).

mod affect;
mod diversity;
mod embedding;
mod overlap;
mod report;

pub use affect::{emotional_alignment, simile_fraction, Alignment};
pub use diversity::{lcs_subsample, max_lcs, unique_fraction, MaxLcs, DEFAULT_LCS_SAMPLE};
pub use embedding::{clip_div_cos, clip_score, group_reference_ids, ref_clip_score, CLIP_WEIGHT};
pub use overlap::{bleu, bleu_counts, corpus_bleu, lcs_len, rouge_l, BleuCounts, MAX_BLEU_ORDER, ROUGE_BETA};
pub use report::{evaluate_all, EvalConfig, EvalInputs, GenerationRecord, MetricReport, TABLE_COLUMNS};
