use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MAX_BLEU_ORDER: usize = 4;
/// Recall weight of ROUGE-L's F-measure.
pub const ROUGE_BETA: f64 = 1.2;

/// Clipped n-gram matches and candidate n-gram totals for orders 1..=4,
/// plus the lengths needed for the brevity penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BleuCounts {
    pub matches: [u64; MAX_BLEU_ORDER],
    pub totals: [u64; MAX_BLEU_ORDER],
    pub candidate_len: u64,
    /// Length of the reference closest in length to the candidate.
    pub reference_len: u64,
}

impl BleuCounts {
    pub fn merge(&mut self, other: &BleuCounts) {
        for k in 0..MAX_BLEU_ORDER {
            self.matches[k] += other.matches[k];
            self.totals[k] += other.totals[k];
        }
        self.candidate_len += other.candidate_len;
        self.reference_len += other.reference_len;
    }

    /// BLEU over orders `1..=n`. With smoothing, an order with no matches
    /// contributes `1 / (total + 1)` instead of zero.
    pub fn score(&self, n: usize, smoothing: bool) -> f64 {
        if self.candidate_len == 0 {
            return 0.0;
        }
        let mut log_sum = 0.0;
        for k in 0..n {
            let (m, t) = (self.matches[k], self.totals[k]);
            let p = if m > 0 {
                m as f64 / t as f64
            } else if smoothing {
                1.0 / (t as f64 + 1.0)
            } else {
                return 0.0;
            };
            log_sum += libm::log(p);
        }
        let (c, r) = (self.candidate_len as f64, self.reference_len as f64);
        let bp = if c > r { 1.0 } else { libm::exp(1.0 - r / c) };
        bp * libm::exp(log_sum / n as f64)
    }
}

fn ngrams<S: AsRef<str>>(tokens: &[S], n: usize) -> BTreeMap<Vec<&str>, u64> {
    let mut counts = BTreeMap::new();
    for w in tokens.windows(n) {
        *counts.entry(w.iter().map(AsRef::as_ref).collect()).or_insert(0) += 1;
    }
    counts
}

fn check_order(n: usize) -> Result<()> {
    if (1..=MAX_BLEU_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(alloc::format!("BLEU order must be in 1..=4, got {n}")))
    }
}

pub fn bleu_counts<S: AsRef<str>, R: AsRef<[S]>>(candidate: &[S], references: &[R]) -> Result<BleuCounts> {
    if references.is_empty() {
        return Err(Error::Empty("references"));
    }
    if candidate.is_empty() {
        return Err(Error::Empty("candidate"));
    }
    let c = candidate.len() as u64;
    let reference_len = references
        .iter()
        .map(|r| r.as_ref().len() as u64)
        .min_by_key(|&r| (r.abs_diff(c), r))
        .expect("nonempty references");
    let mut counts = BleuCounts { candidate_len: c, reference_len, ..Default::default() };
    for n in 1..=MAX_BLEU_ORDER {
        let cand = ngrams(candidate, n);
        let mut max_ref: BTreeMap<Vec<&str>, u64> = BTreeMap::new();
        for r in references {
            for (g, k) in ngrams(r.as_ref(), n) {
                let e = max_ref.entry(g).or_insert(0);
                *e = (*e).max(k);
            }
        }
        counts.totals[n - 1] = cand.values().sum();
        counts.matches[n - 1] = cand.iter().map(|(g, &k)| k.min(*max_ref.get(g).unwrap_or(&0))).sum();
    }
    Ok(counts)
}

/// Sentence BLEU-n against one or more references.
pub fn bleu<S: AsRef<str>, R: AsRef<[S]>>(candidate: &[S], references: &[R], n: usize, smoothing: bool) -> Result<f64> {
    check_order(n)?;
    Ok(bleu_counts(candidate, references)?.score(n, smoothing))
}

/// Corpus BLEU-n: counts are summed over all items before taking ratios.
pub fn corpus_bleu<S: AsRef<str>, R: AsRef<[S]>>(items: &[(&[S], &[R])], n: usize, smoothing: bool) -> Result<f64> {
    check_order(n)?;
    if items.is_empty() {
        return Err(Error::Empty("corpus BLEU items"));
    }
    let mut total = BleuCounts::default();
    for (c, r) in items {
        total.merge(&bleu_counts(c, r)?);
    }
    Ok(total.score(n, smoothing))
}

/// Length of the longest common token subsequence.
pub fn lcs_len<A: AsRef<str>, B: AsRef<str>>(a: &[A], b: &[B]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x.as_ref() == y.as_ref() { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// ROUGE-L F-measure, maximized over references.
pub fn rouge_l<S: AsRef<str>, R: AsRef<[S]>>(candidate: &[S], references: &[R]) -> Result<f64> {
    if references.is_empty() {
        return Err(Error::Empty("references"));
    }
    if candidate.is_empty() {
        return Err(Error::Empty("candidate"));
    }
    let b2 = ROUGE_BETA * ROUGE_BETA;
    let mut best: f64 = 0.0;
    for r in references {
        let r = r.as_ref();
        if r.is_empty() {
            continue;
        }
        let lcs = lcs_len(candidate, r) as f64;
        if lcs == 0.0 {
            continue;
        }
        let p = lcs / candidate.len() as f64;
        let rec = lcs / r.len() as f64;
        best = best.max((1.0 + b2) * p * rec / (rec + b2 * p));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn bleu_examples() {
        assert_eq!(bleu(&t("a cat sat"), &[t("a cat sat")], 1, false).unwrap(), 1.0);
        assert_eq!(bleu(&t("x y"), &[t("a b")], 1, false).unwrap(), 0.0);
        let b = bleu(&t("the the the"), &[t("the cat")], 1, false).unwrap();
        assert!((b - 1.0 / 3.0).abs() < 1e-12);
        assert!(bleu(&t("a"), &[t("a")], 5, false).is_err());
        assert!(bleu::<&str, Vec<&str>>(&t("a"), &[], 1, false).is_err());
    }

    #[test]
    fn brevity_penalty_uses_closest_reference() {
        let c = bleu_counts(&t("a b c"), &[t("a b c d e f g"), t("a b")]).unwrap();
        assert_eq!(c.reference_len, 2);
        let short = bleu(&t("a b"), &[t("a b c d")], 1, false).unwrap();
        assert!((short - libm::exp(1.0 - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn rouge_examples() {
        assert_eq!(rouge_l(&t("a b c"), &[t("a b c")]).unwrap(), 1.0);
        assert_eq!(rouge_l(&t("a b"), &[t("c d")]).unwrap(), 0.0);
        assert!((rouge_l(&t("a b c d"), &[t("a c d e")]).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(lcs_len(&t("a b c d e"), &t("a c e")), 3);
    }
}
