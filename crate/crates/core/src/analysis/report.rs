use alloc::collections::BTreeMap;
use alloc::string::ToString;

use serde::{Deserialize, Serialize};

use super::{
    emotion_distribution, majority_stats, pos_diversity_per_image, pos_stats_per_caption, AgreementStats,
    EmotionHistogram, MajorityRule, PosDiversityRow, PosStatsRow,
};
use crate::corpus::{AnnotationCorpus, SourceDataset};
use crate::lexicons::{
    corpus_concreteness, detect_simile, sentiment_valence, subjectivity, ConcretenessLexicon, ConcretenessSummary,
    Histogram, SentimentClass, SentimentLexicon, SimilePhraseList, SubjectivityLexicon,
};
use crate::text::is_word;
use crate::{Error, Measured, Result};

/// The lexicons an analysis run scores against.
#[derive(Debug, Clone)]
pub struct LexiconSet {
    pub concreteness: ConcretenessLexicon,
    pub sentiment: SentimentLexicon,
    pub subjectivity: SubjectivityLexicon,
    pub similes: SimilePhraseList,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub records: usize,
    pub images: usize,
    pub mean_tokens: f64,
    /// Tokens containing at least one letter or digit.
    pub mean_words: f64,
    pub records_per_source: BTreeMap<SourceDataset, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectivitySummary {
    pub mean: f64,
    /// Per-explanation scores over `[0, 1]`, step 0.05.
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentSummary {
    pub mean_compound: f64,
    pub negative_fraction: f64,
    pub neutral_fraction: f64,
    pub positive_fraction: f64,
    /// Per-explanation compound scores over `[-1, 1]`, step 0.1.
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimileSummary {
    pub explanations_with_simile: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub corpus: CorpusSummary,
    pub pos_per_caption: Measured<PosStatsRow>,
    pub pos_per_image: Measured<PosDiversityRow>,
    pub emotions: EmotionHistogram,
    pub agreement: AgreementStats,
    pub concreteness: Measured<ConcretenessSummary>,
    pub subjectivity: SubjectivitySummary,
    pub sentiment: SentimentSummary,
    pub similes: SimileSummary,
}

/// Every corpus statistic in one document. POS tables are marked
/// unavailable when any record lacks tags; concreteness is unavailable when
/// the lexicon covers no token.
pub fn analysis_report(corpus: &AnnotationCorpus, lexicons: &LexiconSet, rule: MajorityRule) -> Result<AnalysisReport> {
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let n = corpus.len() as f64;
    let records = corpus.records();

    let mut per_source = BTreeMap::new();
    for r in records {
        *per_source.entry(r.source).or_insert(0) += 1;
    }
    let summary = CorpusSummary {
        records: corpus.len(),
        images: corpus.num_images(),
        mean_tokens: records.iter().map(|r| r.tokens.len()).sum::<usize>() as f64 / n,
        mean_words: records.iter().map(|r| r.tokens.iter().filter(|t| is_word(t)).count()).sum::<usize>() as f64 / n,
        records_per_source: per_source,
    };

    let (pos_per_caption, pos_per_image) = if corpus.has_pos_tags() {
        (Measured::Available(pos_stats_per_caption(corpus)?), Measured::Available(pos_diversity_per_image(corpus)?))
    } else {
        let reason = "records carry no part-of-speech tags";
        (Measured::unavailable(reason), Measured::unavailable(reason))
    };

    let concreteness = match corpus_concreteness(corpus, &lexicons.concreteness) {
        Ok(c) => Measured::Available(c),
        Err(Error::Empty(_)) => Measured::unavailable("no token is covered by the concreteness lexicon"),
        Err(e) => return Err(e),
    };

    let mut subj_hist = Histogram::new(0.0, 1.0, 0.05);
    let mut subj_sum = 0.0;
    let mut sent_hist = Histogram::new(-1.0, 1.0, 0.1);
    let mut sent_sum = 0.0;
    let mut classes = [0usize; 3];
    let mut similes = 0;
    for r in records {
        let s = subjectivity(&r.tokens, &lexicons.subjectivity);
        subj_sum += s;
        subj_hist.add(s);
        let v = sentiment_valence(&r.tokens, &lexicons.sentiment);
        sent_sum += v.compound;
        sent_hist.add(v.compound);
        classes[v.class as usize] += 1;
        if detect_simile(&r.tokens, &lexicons.similes) {
            similes += 1;
        }
    }

    Ok(AnalysisReport {
        corpus: summary,
        pos_per_caption,
        pos_per_image,
        emotions: emotion_distribution(corpus)?,
        agreement: majority_stats(corpus, rule)?,
        concreteness,
        subjectivity: SubjectivitySummary { mean: subj_sum / n, histogram: subj_hist },
        sentiment: SentimentSummary {
            mean_compound: sent_sum / n,
            negative_fraction: classes[SentimentClass::Negative as usize] as f64 / n,
            neutral_fraction: classes[SentimentClass::Neutral as usize] as f64 / n,
            positive_fraction: classes[SentimentClass::Positive as usize] as f64 / n,
            histogram: sent_hist,
        },
        similes: SimileSummary { explanations_with_simile: similes, fraction: similes as f64 / n },
    })
}

impl AnalysisReport {
    /// Internal consistency check used by tests and the CLI.
    pub fn check_consistency(&self) -> Result<()> {
        let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
        let total: f64 = self.emotions.fractions.values().sum();
        let rollup = self.emotions.positive + self.emotions.negative + self.emotions.something_else;
        let sentiment =
            self.sentiment.negative_fraction + self.sentiment.neutral_fraction + self.sentiment.positive_fraction;
        let records = self.corpus.records as u64;
        if !close(total, 1.0) || !close(rollup, 1.0) || !close(sentiment, 1.0) {
            return Err(Error::InvalidArgument("fractions do not sum to 1".to_string()));
        }
        if self.emotions.total != records
            || self.sentiment.histogram.total() != records
            || self.subjectivity.histogram.total() != records
        {
            return Err(Error::InvalidArgument("section totals disagree with record count".to_string()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixtures::record;
    use crate::EmotionLabel::*;
    use alloc::vec;

    fn lexicons() -> LexiconSet {
        LexiconSet {
            concreteness: ConcretenessLexicon::parse("bird\t5\nfreedom\t2.34\n").unwrap(),
            sentiment: SentimentLexicon::parse("love\t3.2\nsad\t-2.1\n", "very\t0.293\n", "not\n").unwrap(),
            subjectivity: SubjectivityLexicon::parse("nice\t1.0\nred\t0.0\n").unwrap(),
            similes: SimilePhraseList::default(),
        }
    }

    #[test]
    fn small_fixture_is_consistent() {
        let corpus = AnnotationCorpus::new(vec![
            record("a", Awe, "i love the bird in the sky"),
            record("a", Awe, "the sky looks like freedom"),
            record("b", Sadness, "a sad and lonely red bird"),
            record("b", Fear, "i do not love this dark place"),
            record("c", SomethingElse, "the car is nice"),
        ])
        .unwrap();
        let report = analysis_report(&corpus, &lexicons(), MajorityRule::default()).unwrap();
        report.check_consistency().unwrap();
        assert_eq!(report.corpus.records, 5);
        assert_eq!(report.similes.explanations_with_simile, 1);
        assert!(!report.pos_per_caption.is_available());
        assert!(matches!(report.pos_per_image, Measured::Unavailable(_)));
        let conc = report.concreteness.value().unwrap();
        assert!((conc.mean - (5.0 + 2.34 + 5.0) / 3.0).abs() < 1e-12);
    }
}
