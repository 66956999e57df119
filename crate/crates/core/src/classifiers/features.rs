use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Unigram and bigram feature ids. Bigram names join the two tokens with a
/// single space.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NgramFeatures {
    names: Vec<String>,
    index: BTreeMap<String, u32>,
}

fn ngrams<S: AsRef<str>>(tokens: &[S]) -> impl Iterator<Item = String> + '_ {
    let unigrams = tokens.iter().map(|t| String::from(t.as_ref()));
    let bigrams = tokens.windows(2).map(|w| alloc::format!("{} {}", w[0].as_ref(), w[1].as_ref()));
    unigrams.chain(bigrams)
}

impl NgramFeatures {
    /// Keep n-grams seen in at least `min_count` documents; ids follow
    /// lexicographic order.
    pub fn build<'a, S: AsRef<str> + 'a>(documents: impl IntoIterator<Item = &'a [S]>, min_count: usize) -> Self {
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for doc in documents {
            let mut grams: Vec<String> = ngrams(doc).collect();
            grams.sort();
            grams.dedup();
            for g in grams {
                *df.entry(g).or_default() += 1;
            }
        }
        let names: Vec<String> = df.into_iter().filter(|&(_, c)| c >= min_count.max(1)).map(|(g, _)| g).collect();
        Self::from_names(names).expect("names are unique")
    }

    pub fn from_names(names: Vec<String>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i as u32).is_some() {
                return Err(Error::DuplicateId(n.clone()));
            }
        }
        Ok(Self { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Sorted, deduplicated ids of the known n-grams present in `tokens`.
    pub fn extract<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<u32> {
        let mut ids: Vec<u32> = ngrams(tokens).filter_map(|g| self.index.get(&g).copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unigrams_and_bigrams() {
        let docs: [&[&str]; 2] = [&["a", "b", "a"], &["b", "c"]];
        let f = NgramFeatures::build(docs, 1);
        assert_eq!(f.names(), ["a", "a b", "b", "b a", "b c", "c"]);
        assert_eq!(f.extract(&["a", "b", "z"]), [0, 1, 2]);
        assert!(f.extract(&["zz", "yy"]).is_empty());
        let frequent = NgramFeatures::build(docs, 2);
        assert_eq!(frequent.names(), ["b"]);
    }
}
