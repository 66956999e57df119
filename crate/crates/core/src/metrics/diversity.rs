use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::overlap::lcs_len;
use crate::{Error, Result};

pub const DEFAULT_LCS_SAMPLE: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxLcs {
    /// Longest common subsequence with any sampled utterance, in tokens.
    pub length: usize,
    /// `length` as a percentage of the generation length.
    pub percent: f64,
}

pub fn max_lcs<S: AsRef<str>, T: AsRef<str>, R: AsRef<[T]>>(generation: &[S], sample: &[R]) -> Result<MaxLcs> {
    if generation.is_empty() {
        return Err(Error::Empty("generation"));
    }
    if sample.is_empty() {
        return Err(Error::Empty("training sample"));
    }
    let length = sample.iter().map(|r| lcs_len(generation, r.as_ref())).max().expect("nonempty sample");
    Ok(MaxLcs { length, percent: 100.0 * length as f64 / generation.len() as f64 })
}

/// Indices of a seeded subsample of `size` out of `total` items.
///
/// The sample is a prefix of one seeded permutation, so for a fixed seed a
/// larger sample always contains a smaller one.
pub fn lcs_subsample(total: usize, size: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order.truncate(size.min(total));
    order.sort_unstable();
    order
}

/// Percentage of distinct strings.
pub fn unique_fraction<S: AsRef<str>>(generations: &[S]) -> Result<f64> {
    if generations.is_empty() {
        return Err(Error::Empty("generations"));
    }
    let distinct: BTreeSet<&str> = generations.iter().map(AsRef::as_ref).collect();
    Ok(100.0 * distinct.len() as f64 / generations.len() as f64)
}
