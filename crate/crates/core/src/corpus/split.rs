use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AnnotationCorpus;
use crate::{Error, Result};

pub const DEFAULT_RATIOS: [f64; 3] = [0.85, 0.05, 0.10];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "val" | "valid" | "validation" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(Error::InvalidArgument(alloc::format!("unknown split {other:?}"))),
        }
    }
}

/// Image-level train/val/test assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub assignment: BTreeMap<String, Split>,
    pub ratios: [f64; 3],
    pub seed: u64,
}

impl SplitAssignment {
    pub fn get(&self, image_id: &str) -> Option<Split> {
        self.assignment.get(image_id).copied()
    }

    pub fn images(&self, split: Split) -> impl Iterator<Item = &str> {
        self.assignment.iter().filter(move |(_, &s)| s == split).map(|(id, _)| id.as_str())
    }

    pub fn sizes(&self) -> [usize; 3] {
        let mut sizes = [0; 3];
        for s in self.assignment.values() {
            sizes[*s as usize] += 1;
        }
        sizes
    }

    /// Records whose image falls in `split`; images missing from the
    /// assignment are dropped.
    pub fn subset(&self, corpus: &AnnotationCorpus, split: Split) -> AnnotationCorpus {
        corpus.filter(|r| self.get(&r.image_id) == Some(split))
    }
}

/// Shuffle the corpus images with a seeded generator and cut the shuffled
/// list at the rounded cumulative ratios.
pub fn split(corpus: &AnnotationCorpus, ratios: [f64; 3], seed: u64) -> Result<SplitAssignment> {
    if ratios.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::InvalidArgument("split ratios must be nonnegative".into()));
    }
    let total: f64 = ratios.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(alloc::format!("split ratios sum to {total}, not 1")));
    }
    let n = corpus.num_images();
    if n < 3 {
        return Err(Error::InsufficientPool { needed: 3, available: n });
    }
    let mut images: Vec<&str> = corpus.image_ids().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    images.shuffle(&mut rng);

    let train_end = libm::round(ratios[0] * n as f64) as usize;
    let val_end = (libm::round((ratios[0] + ratios[1]) * n as f64) as usize).max(train_end);
    let assignment = images
        .into_iter()
        .enumerate()
        .map(|(i, id)| {
            let s = if i < train_end {
                Split::Train
            } else if i < val_end.min(n) {
                Split::Val
            } else {
                Split::Test
            };
            (String::from(id), s)
        })
        .collect();
    Ok(SplitAssignment { assignment, ratios, seed })
}
