use alloc::collections::BTreeMap;
use alloc::string::String;

use super::parse_scored_terms;
use crate::{Error, Result};

/// Term → subjectivity weight in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SubjectivityLexicon {
    weights: BTreeMap<String, f64>,
}

impl SubjectivityLexicon {
    pub fn from_entries(entries: impl IntoIterator<Item = (String, f64)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (term, w) in entries {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidArgument(alloc::format!("subjectivity of {term:?} is {w}, outside [0, 1]")));
            }
            weights.insert(term, w);
        }
        Ok(Self { weights })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_entries(parse_scored_terms(text)?)
    }

    pub fn weight(&self, token: &str) -> Option<f64> {
        self.weights.get(&token.to_lowercase()).copied()
    }
}

/// Mean weight of the tokens found in the lexicon; 0 when none match.
pub fn subjectivity<S: AsRef<str>>(sentence: &[S], lexicon: &SubjectivityLexicon) -> f64 {
    let (sum, n) =
        sentence.iter().filter_map(|t| lexicon.weight(t.as_ref())).fold((0.0, 0usize), |(s, n), w| (s + w, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_of_matches() {
        let lex = SubjectivityLexicon::parse("red\t0.0\nnice\t1.0\nbig\t0.1\n").unwrap();
        assert_eq!(subjectivity(&["the", "car", "is", "red"], &lex), 0.0);
        assert_eq!(subjectivity(&["the", "car", "is", "nice"], &lex), 1.0);
        assert!((subjectivity(&["nice", "big", "car"], &lex) - 0.55).abs() < 1e-12);
        assert_eq!(subjectivity(&["nothing", "here"], &lex), 0.0);
        assert!(SubjectivityLexicon::parse("x\t1.5").is_err());
    }
}
