//! Descriptive corpus statistics.

mod emotions;
mod pos;
mod report;

pub use emotions::{
    emotion_distribution, majority_stats, strong_majority_labels, AgreementStats, EmotionHistogram, MajorityRule,
};
pub use pos::{pos_diversity_per_image, pos_stats_per_caption, PosCategory, PosDiversityRow, PosStatsRow};
pub use report::{analysis_report, AnalysisReport, CorpusSummary, LexiconSet, SentimentSummary, SubjectivitySummary};
