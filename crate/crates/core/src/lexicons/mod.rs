//! Lexicon-backed scorers over token lists.
//!
//! Lexicons are parsed from tab-separated text (`term<TAB>score[<TAB>extras]`,
//! `#` comments and blank lines ignored). Parsing takes `&str` so callers
//! decide where the text comes from.

mod concreteness;
mod sentiment;
mod simile;
mod subjectivity;

pub use concreteness::{corpus_concreteness, ConcretenessLexicon, ConcretenessSummary};
pub use sentiment::{sentiment_valence, SentimentClass, SentimentLexicon, SentimentScore};
pub use simile::{detect_simile, SimilePhraseList, DEFAULT_SIMILE_PHRASES};
pub use subjectivity::{subjectivity, SubjectivityLexicon};

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result};

/// Parse `term<TAB>value` lines. Returns `(lowercased term, value)` pairs.
pub fn parse_scored_terms(text: &str) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for (i, line) in data_lines(text) {
        let mut fields = line.split('\t');
        let term = fields.next().unwrap_or_default().trim();
        let value = fields
            .next()
            .map(str::trim)
            .ok_or_else(|| Error::Parse { line: i, message: "expected term<TAB>score".to_string() })?;
        let value: f64 =
            value.parse().map_err(|_| Error::Parse { line: i, message: alloc::format!("bad score {value:?}") })?;
        if term.is_empty() || !value.is_finite() {
            return Err(Error::Parse { line: i, message: "empty term or non-finite score".to_string() });
        }
        out.push((term.to_lowercase(), value));
    }
    Ok(out)
}

/// Parse one term per line (extra tab-separated columns are ignored).
pub fn parse_terms(text: &str) -> Vec<String> {
    data_lines(text)
        .filter_map(|(_, line)| {
            let term = line.split('\t').next().unwrap_or_default().trim();
            (!term.is_empty()).then(|| term.to_lowercase())
        })
        .collect()
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

/// Histogram over a closed interval with equal-width bins; a value equal to
/// the upper edge falls in the last bin and values outside are clamped.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, step: f64) -> Self {
        let bins = libm::round((hi - lo) / step) as usize;
        Self { lo, hi, step, counts: alloc::vec![0; bins.max(1)] }
    }

    pub fn add(&mut self, value: f64) {
        let last = self.counts.len() - 1;
        let raw = libm::floor((value - self.lo) / self.step);
        let bin = if raw <= 0.0 { 0 } else { (raw as usize).min(last) };
        self.counts[bin] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn fractions(&self) -> Vec<f64> {
        let total = self.total();
        self.counts.iter().map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 }).collect()
    }

    /// `(lower, upper)` edges of bin `i`.
    pub fn edges(&self, i: usize) -> (f64, f64) {
        let lo = self.lo + self.step * i as f64;
        (lo, if i + 1 == self.counts.len() { self.hi } else { lo + self.step })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tsv_with_comments() {
        let parsed = parse_scored_terms("# header\nBird\t5.0\textra\n\ncage\t5\n").unwrap();
        assert_eq!(parsed, [("bird".into(), 5.0), ("cage".into(), 5.0)]);
        assert!(matches!(parse_scored_terms("bird\tfive"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_scored_terms("bird").is_err());
    }

    #[test]
    fn histogram_edges() {
        let mut h = Histogram::new(1.0, 5.0, 0.25);
        assert_eq!(h.counts.len(), 16);
        h.add(1.0);
        h.add(5.0);
        h.add(1.24);
        h.add(0.0);
        assert_eq!(h.counts[0], 3);
        assert_eq!(h.counts[15], 1);
        assert_eq!(h.edges(15), (4.75, 5.0));
    }
}
