use alloc::collections::BTreeMap;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::classifiers::EmotionPredictor;
use crate::lexicons::{detect_simile, SimilePhraseList};
use crate::{EmotionLabel, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    pub percent: f64,
    /// Generations whose image has a majority label.
    pub support: usize,
    pub matches: usize,
}

/// Percentage of covered generations whose predicted emotion (argmax)
/// equals the image's majority label. Generations are `(image id, tokens)`.
pub fn emotional_alignment<'a>(
    generations: impl IntoIterator<Item = (&'a str, &'a [String])>,
    classifier: &impl EmotionPredictor,
    majority: &BTreeMap<String, EmotionLabel>,
) -> Result<Alignment> {
    let (mut support, mut matches) = (0, 0);
    for (image, tokens) in generations {
        if let Some(&label) = majority.get(image) {
            support += 1;
            if classifier.predict_tokens(tokens).argmax() == label {
                matches += 1;
            }
        }
    }
    if support == 0 {
        return Err(Error::Empty("generations of images with a majority label"));
    }
    Ok(Alignment { percent: 100.0 * matches as f64 / support as f64, support, matches })
}

/// Percentage of generations containing a simile phrase; 0 when there are none.
pub fn simile_fraction<S: AsRef<str>, G: AsRef<[S]>>(generations: &[G], phrases: &SimilePhraseList) -> f64 {
    if generations.is_empty() {
        return 0.0;
    }
    let hits = generations.iter().filter(|g| detect_simile(g.as_ref(), phrases)).count();
    100.0 * hits as f64 / generations.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::EmotionDistribution;
    use alloc::vec;
    use alloc::vec::Vec;

    struct Constant(EmotionLabel);

    impl EmotionPredictor for Constant {
        fn predict_tokens(&self, _: &[String]) -> EmotionDistribution {
            EmotionDistribution::one_hot(self.0)
        }
    }

    #[test]
    fn alignment_examples() {
        let toks: Vec<String> = vec!["x".into()];
        let majority: BTreeMap<String, EmotionLabel> =
            [("a".into(), EmotionLabel::Awe), ("b".into(), EmotionLabel::Fear)].into();
        let gens = [("a", toks.as_slice()), ("b", toks.as_slice()), ("c", toks.as_slice()), ("a", toks.as_slice())];
        let r = emotional_alignment(gens, &Constant(EmotionLabel::Awe), &majority).unwrap();
        assert_eq!((r.support, r.matches), (3, 2));
        let r = emotional_alignment(gens, &Constant(EmotionLabel::Anger), &majority).unwrap();
        assert_eq!(r.percent, 0.0);
        assert!(emotional_alignment([("c", toks.as_slice())], &Constant(EmotionLabel::Awe), &majority).is_err());
    }

    #[test]
    fn simile_examples() {
        let phrases = SimilePhraseList::default();
        let gens = [vec!["it", "looks", "like", "a", "face"], vec!["a", "dog"]];
        assert_eq!(simile_fraction(&gens, &phrases), 50.0);
        assert_eq!(simile_fraction(&gens[1..], &phrases), 0.0);
    }
}
