//! Listener/speaker fused re-ranking of sampled captions.
//!
//! Each candidate caption carries its speaker log-likelihood
//! `log P_S(u | i)`. A listener turns caption/image cosines into
//! `log P_L(i, u)`, a softmax over the candidates of the same image.
//! Candidates are then ordered by
//!
//! ```text
//! score = β · log P_L + (1 − β) · s · log P_S
//! ```
//!
//! where `s` rescales the speaker term so that both terms have the same
//! average magnitude over a calibration set.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::EmbeddingTable;
use crate::text::tokenize;
use crate::vector::{cosine, log_softmax_in_place};
use crate::{EmotionLabel, Error, Result};

pub use crate::listener::DEFAULT_TEMPERATURE;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub text: String,
    #[serde(default)]
    pub tokens: Vec<String>,
    /// Natural-log speaker likelihood, `≤ 0`.
    pub log_p_speaker: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emotion: Option<EmotionLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text_embedding_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_p_listener: Option<f64>,
}

impl Candidate {
    pub fn new(text: impl Into<String>, log_p_speaker: f64) -> Result<Self> {
        let text = text.into();
        let candidate = Self {
            tokens: tokenize(&text),
            text,
            log_p_speaker,
            emotion: None,
            text_embedding_id: None,
            log_p_listener: None,
        };
        candidate.validate()?;
        Ok(candidate)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.log_p_speaker.is_finite() || self.log_p_speaker > 0.0 {
            return Err(Error::InvalidArgument(format!(
                "speaker log-probability of {:?} must be finite and <= 0, got {}",
                self.text, self.log_p_speaker
            )));
        }
        if let Some(l) = self.log_p_listener {
            if !l.is_finite() || l > 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "listener log-probability of {:?} must be finite and <= 0, got {l}",
                    self.text
                )));
            }
        }
        Ok(())
    }

    fn listener(&self) -> Result<f64> {
        self.log_p_listener.ok_or_else(|| Error::Unscored(self.text.clone()))
    }
}

/// The sampled captions of one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub image_id: String,
    pub image_embedding_id: String,
    pub candidates: Vec<Candidate>,
}

impl CandidateSet {
    pub fn new(
        image_id: impl Into<String>,
        image_embedding_id: impl Into<String>,
        candidates: Vec<Candidate>,
    ) -> Result<Self> {
        let set = Self { image_id: image_id.into(), image_embedding_id: image_embedding_id.into(), candidates };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        if self.candidates.is_empty() {
            return Err(Error::InvalidArgument(format!("candidate set for image {:?} is empty", self.image_id)));
        }
        self.candidates.iter().try_for_each(Candidate::validate)
    }

    pub fn is_scored(&self) -> bool {
        self.candidates.iter().all(|c| c.log_p_listener.is_some())
    }
}

/// Within-set log-softmax of `cosine / temperature`.
pub fn listener_logprobs_from_cosines(cosines: &[f64], temperature: f64) -> Vec<f64> {
    let mut out: Vec<f64> = cosines.iter().map(|c| c / temperature).collect();
    log_softmax_in_place(&mut out);
    out.iter_mut().for_each(|v| *v = v.min(0.0));
    out
}

/// Fill `log_p_listener` for every candidate of the set.
///
/// Candidates without a `text_embedding_id` are looked up by their text.
pub fn listener_logprob(
    set: &mut CandidateSet,
    text_embeddings: &EmbeddingTable,
    image_embeddings: &EmbeddingTable,
    temperature: f64,
) -> Result<()> {
    if !(temperature > 0.0) {
        return Err(Error::InvalidArgument("temperature must be positive".into()));
    }
    text_embeddings.check_compatible(image_embeddings)?;
    let image = image_embeddings.require(&set.image_embedding_id)?;
    let cosines = set
        .candidates
        .iter()
        .map(|c| {
            let id = c.text_embedding_id.as_deref().unwrap_or(&c.text);
            cosine(text_embeddings.require(id)?, image)
        })
        .collect::<Result<Vec<f64>>>()?;
    for (c, l) in set.candidates.iter_mut().zip(listener_logprobs_from_cosines(&cosines, temperature)) {
        c.log_p_listener = Some(l);
    }
    Ok(())
}

fn mean_ratio<'a>(candidates: impl Iterator<Item = &'a Candidate>) -> Result<f64> {
    let (mut listener, mut speaker, mut n) = (0.0, 0.0, 0usize);
    for c in candidates {
        listener += c.listener()?;
        speaker += c.log_p_speaker;
        n += 1;
    }
    if n == 0 {
        return Err(Error::Empty("calibration candidates"));
    }
    if speaker == 0.0 {
        return Err(Error::Degenerate("mean speaker log-probability is zero"));
    }
    let s = (listener / n as f64) / (speaker / n as f64);
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Degenerate("mean listener log-probability is zero"));
    }
    Ok(s)
}

/// `s = mean(log P_L) / mean(log P_S)` over every candidate of every set.
pub fn calibrate_rescale(sets: &[CandidateSet]) -> Result<f64> {
    if sets.is_empty() {
        return Err(Error::Empty("candidate sets"));
    }
    mean_ratio(sets.iter().flat_map(|s| &s.candidates))
}

/// The same ratio restricted to one set.
pub fn calibrate_rescale_per_set(set: &CandidateSet) -> Result<f64> {
    mean_ratio(set.candidates.iter())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Higher listener log-probability first, then lexicographic text.
    #[default]
    ListenerThenText,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PragmaticConfig {
    pub beta: f64,
    pub rescale: f64,
    pub tie_break: TieBreak,
}

impl PragmaticConfig {
    pub fn new(beta: f64, rescale: f64) -> Result<Self> {
        let config = Self { beta, rescale, tie_break: TieBreak::default() };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidArgument(format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        if !(self.rescale > 0.0 && self.rescale.is_finite()) {
            return Err(Error::InvalidArgument(format!("rescale factor must be positive, got {}", self.rescale)));
        }
        Ok(())
    }
}

pub fn pragmatic_score(candidate: &Candidate, config: &PragmaticConfig) -> Result<f64> {
    let listener = candidate.listener()?;
    Ok(config.beta * listener + (1.0 - config.beta) * config.rescale * candidate.log_p_speaker)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    /// Candidate indices, best first.
    pub order: Vec<usize>,
    /// Score of each candidate, by candidate index.
    pub scores: Vec<f64>,
    /// Index of the chosen candidate (`order[0]`).
    pub selected: usize,
}

impl Ranking {
    /// Rank of each candidate (0 = selected), by candidate index.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = alloc::vec![0; self.order.len()];
        for (rank, &i) in self.order.iter().enumerate() {
            ranks[i] = rank;
        }
        ranks
    }
}

pub fn rerank(set: &CandidateSet, config: &PragmaticConfig) -> Result<Ranking> {
    config.validate()?;
    let scores = set.candidates.iter().map(|c| pragmatic_score(c, config)).collect::<Result<Vec<f64>>>()?;
    let mut order: Vec<usize> = (0..set.candidates.len()).collect();
    let TieBreak::ListenerThenText = config.tie_break;
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&set.candidates[a], &set.candidates[b]);
        scores[b]
            .total_cmp(&scores[a])
            .then_with(|| cb.log_p_listener.unwrap_or(0.0).total_cmp(&ca.log_p_listener.unwrap_or(0.0)))
            .then_with(|| ca.text.cmp(&cb.text))
            .then(a.cmp(&b))
    });
    let selected = *order.first().ok_or(Error::Empty("candidate set"))?;
    Ok(Ranking { order, scores, selected })
}

/// Rescale factor per set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "value")]
pub enum Rescale {
    Global(f64),
    PerSet(Vec<f64>),
}

impl Rescale {
    pub fn for_set(&self, index: usize) -> f64 {
        match self {
            Rescale::Global(s) => *s,
            Rescale::PerSet(v) => v[index],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CalibrationMode {
    #[default]
    Global,
    PerSet,
}

pub fn calibrate(sets: &[CandidateSet], mode: CalibrationMode) -> Result<Rescale> {
    match mode {
        CalibrationMode::Global => calibrate_rescale(sets).map(Rescale::Global),
        CalibrationMode::PerSet => {
            if sets.is_empty() {
                return Err(Error::Empty("candidate sets"));
            }
            sets.iter().map(calibrate_rescale_per_set).collect::<Result<Vec<f64>>>().map(Rescale::PerSet)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaSweep {
    pub betas: Vec<f64>,
    /// `selected[b][k]`: chosen candidate of set `k` at `betas[b]`.
    pub selected: Vec<Vec<usize>>,
}

impl BetaSweep {
    /// Selected candidates at one β, in set order.
    pub fn selections<'a>(&self, sets: &'a [CandidateSet], beta_index: usize) -> Vec<&'a Candidate> {
        sets.iter().zip(&self.selected[beta_index]).map(|(s, &i)| &s.candidates[i]).collect()
    }
}

pub fn beta_sweep(sets: &[CandidateSet], betas: &[f64], rescale: &Rescale) -> Result<BetaSweep> {
    if let Rescale::PerSet(v) = rescale {
        if v.len() != sets.len() {
            return Err(Error::DimensionMismatch { expected: sets.len(), found: v.len() });
        }
    }
    let mut selected = Vec::with_capacity(betas.len());
    for &beta in betas {
        let column = sets
            .iter()
            .enumerate()
            .map(|(k, set)| rerank(set, &PragmaticConfig::new(beta, rescale.for_set(k))?).map(|r| r.selected))
            .collect::<Result<Vec<usize>>>()?;
        selected.push(column);
    }
    Ok(BetaSweep { betas: betas.to_vec(), selected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn scored(text: &str, listener: f64, speaker: f64) -> Candidate {
        let mut c = Candidate::new(text, speaker).unwrap();
        c.log_p_listener = Some(listener);
        c
    }

    fn set(pairs: &[(&str, f64, f64)]) -> CandidateSet {
        CandidateSet::new("img", "img", pairs.iter().map(|&(t, l, s)| scored(t, l, s)).collect()).unwrap()
    }

    #[test]
    fn listener_probabilities() {
        assert_eq!(listener_logprobs_from_cosines(&[0.4], 0.07), vec![0.0]);
        let two = listener_logprobs_from_cosines(&[0.2, 0.2], 0.07);
        assert!(two.iter().all(|l| (l - libm::log(0.5)).abs() < 1e-12));
        let lp = listener_logprobs_from_cosines(&[1.0, 0.0], 1.0);
        assert!((lp[0] + 0.313_261_687_518_222_8).abs() < 1e-12);
        assert!((lp[1] + 1.313_261_687_518_222_8).abs() < 1e-12);
    }

    #[test]
    fn listener_logprob_uses_embeddings() {
        let text = EmbeddingTable::new("clip", 2, vec!["a".into(), "b".into()], vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let img = EmbeddingTable::new("clip", 2, vec!["img".into()], vec![1.0, 0.0]).unwrap();
        let mut s = CandidateSet::new(
            "img",
            "img",
            vec![Candidate::new("a", -1.0).unwrap(), Candidate::new("b", -1.0).unwrap()],
        )
        .unwrap();
        listener_logprob(&mut s, &text, &img, 1.0).unwrap();
        assert!((s.candidates[0].log_p_listener.unwrap() + 0.313_261_687_518_222_8).abs() < 1e-12);
        s.candidates[1].text = "zz".into();
        assert_eq!(listener_logprob(&mut s, &text, &img, 1.0), Err(Error::MissingEmbedding("zz".into())));
    }

    #[test]
    fn calibration_arithmetic() {
        let a = set(&[("x", -2.0, -200.0)]);
        assert!((calibrate_rescale(&[a]).unwrap() - 0.01).abs() < 1e-15);
        assert_eq!(calibrate_rescale(&[set(&[("x", -3.0, -3.0)])]).unwrap(), 1.0);
        assert_eq!(calibrate_rescale(&[]), Err(Error::Empty("candidate sets")));
        let unscored = CandidateSet::new("i", "i", vec![Candidate::new("x", -1.0).unwrap()]).unwrap();
        assert_eq!(calibrate_rescale(&[unscored]), Err(Error::Unscored("x".into())));
    }

    #[test]
    fn scoring_endpoints_and_ties() {
        let c = scored("x", -1.5, -4.0);
        assert_eq!(pragmatic_score(&c, &PragmaticConfig::new(0.0, 0.5).unwrap()).unwrap(), -2.0);
        assert_eq!(pragmatic_score(&c, &PragmaticConfig::new(1.0, 0.5).unwrap()).unwrap(), -1.5);
        let tie = set(&[("b", -2.0, -1.0), ("a", -1.0, -2.0)]);
        let r = rerank(&tie, &PragmaticConfig::new(0.5, 1.0).unwrap()).unwrap();
        assert_eq!(r.scores, vec![-1.5, -1.5]);
        assert_eq!(r.order, vec![1, 0]);
    }

    #[test]
    fn three_candidate_order() {
        let s = set(&[("A", -1.0, -3.0), ("B", -2.0, -1.0), ("C", -3.0, -2.0)]);
        let r = rerank(&s, &PragmaticConfig::new(0.5, 1.0).unwrap()).unwrap();
        assert_eq!(r.scores, vec![-2.0, -1.5, -2.5]);
        assert_eq!(r.order, vec![1, 0, 2]);
        assert_eq!(r.ranks(), vec![1, 0, 2]);
    }

    #[test]
    fn config_validation() {
        assert!(PragmaticConfig::new(1.1, 1.0).is_err());
        assert!(PragmaticConfig::new(0.5, 0.0).is_err());
        assert!(Candidate::new("x", 0.5).is_err());
    }

    #[test]
    fn sweep_duplicates_are_identical() {
        let s = vec![set(&[("A", -1.0, -3.0), ("B", -2.0, -1.0)])];
        let sweep = beta_sweep(&s, &[0.0, 0.3, 0.3, 1.0], &Rescale::Global(1.0)).unwrap();
        assert_eq!(sweep.selected[1], sweep.selected[2]);
        assert_eq!(sweep.selected[0], vec![1]);
        assert_eq!(sweep.selected[3], vec![0]);
    }
}
