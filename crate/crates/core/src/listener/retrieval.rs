use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::EmbeddingTable;
use crate::vector::cosine;
use crate::{Error, Result};

/// One caption paired with its target image and the sampled distractors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrievalTrial {
    pub caption_id: String,
    pub target_id: String,
    pub distractor_ids: Vec<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub distractors: usize,
    pub mean: f64,
    /// Sample standard deviation over seeds (0 for a single seed).
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalCurve {
    pub points: Vec<CurvePoint>,
    pub seeds: Vec<u64>,
    pub trials_per_seed: usize,
    /// Accuracy per distractor count, in seed order.
    pub per_seed: BTreeMap<usize, Vec<f64>>,
}

/// A hit iff the caption is strictly closer (cosine) to the target than to every distractor.
pub fn retrieval_trial(caption: &[f32], target: &[f32], distractors: &[&[f32]]) -> Result<bool> {
    let to_target = cosine(caption, target)?;
    let mut hit = true;
    for d in distractors {
        if cosine(caption, d)? >= to_target {
            hit = false;
        }
    }
    Ok(hit)
}

struct Pool<'a> {
    captions: Vec<&'a [f32]>,
    targets: Vec<usize>,
    images: Vec<&'a [f32]>,
}

fn build_pool<'a>(
    captions: &'a EmbeddingTable,
    images: &'a EmbeddingTable,
    pairs: &'a [(String, String)],
) -> Result<(Pool<'a>, Vec<&'a str>)> {
    if pairs.is_empty() {
        return Err(Error::Empty("retrieval pairs"));
    }
    if captions.dim() != images.dim() {
        return Err(Error::DimensionMismatch { expected: images.dim(), found: captions.dim() });
    }
    if captions.space_tag() != images.space_tag() {
        return Err(Error::SpaceMismatch { expected: images.space_tag().into(), found: captions.space_tag().into() });
    }
    let mut image_pos: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, image) in pairs {
        let next = image_pos.len();
        image_pos.entry(image.as_str()).or_insert(next);
    }
    let mut ids: Vec<&str> = Vec::new();
    ids.resize(image_pos.len(), "");
    for (&id, &pos) in &image_pos {
        ids[pos] = id;
    }
    let mut pool = Pool { captions: Vec::new(), targets: Vec::new(), images: Vec::new() };
    for id in &ids {
        pool.images.push(images.require(id)?);
    }
    for (caption, image) in pairs {
        pool.captions.push(captions.require(caption)?);
        pool.targets.push(image_pos[image.as_str()]);
    }
    Ok((pool, ids))
}

fn sample_distractors(rng: &mut ChaCha8Rng, pool_size: usize, target: usize, n: usize) -> Vec<usize> {
    index::sample(rng, pool_size - 1, n).into_iter().map(|i| if i >= target { i + 1 } else { i }).collect()
}

fn stream_rng(seed: u64, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    rng
}

fn run_trials(pool: &Pool<'_>, n: usize, seed: u64, mut visit: impl FnMut(usize, &[usize], bool)) -> Result<f64> {
    let available = pool.images.len();
    if available < n + 1 {
        return Err(Error::InsufficientPool { needed: n + 1, available });
    }
    let mut rng = stream_rng(seed, n);
    let mut hits = 0usize;
    let mut distractors: Vec<&[f32]> = Vec::with_capacity(n);
    for (k, (&caption, &target)) in pool.captions.iter().zip(&pool.targets).enumerate() {
        let sampled = sample_distractors(&mut rng, available, target, n);
        distractors.clear();
        distractors.extend(sampled.iter().map(|&i| pool.images[i]));
        let hit = retrieval_trial(caption, pool.images[target], &distractors)?;
        hits += hit as usize;
        visit(k, &sampled, hit);
    }
    Ok(hits as f64 / pool.captions.len() as f64)
}

/// Accuracy over all pairs for one distractor count and seed.
///
/// Pairs are `(caption id, image id)`. Distractors are drawn uniformly
/// without replacement from the other distinct images among the pairs.
pub fn retrieval_accuracy(
    captions: &EmbeddingTable,
    images: &EmbeddingTable,
    pairs: &[(String, String)],
    distractors: usize,
    seed: u64,
) -> Result<f64> {
    let (pool, _) = build_pool(captions, images, pairs)?;
    run_trials(&pool, distractors, seed, |_, _, _| {})
}

/// The trials [`retrieval_accuracy`] would run, with their outcomes.
pub fn enumerate_trials(
    captions: &EmbeddingTable,
    images: &EmbeddingTable,
    pairs: &[(String, String)],
    distractors: usize,
    seed: u64,
) -> Result<Vec<(RetrievalTrial, bool)>> {
    let (pool, ids) = build_pool(captions, images, pairs)?;
    let mut out = Vec::with_capacity(pairs.len());
    run_trials(&pool, distractors, seed, |k, sampled, hit| {
        let trial = RetrievalTrial {
            caption_id: pairs[k].0.clone(),
            target_id: pairs[k].1.clone(),
            distractor_ids: sampled.iter().map(|&i| String::from(ids[i])).collect(),
            seed,
        };
        out.push((trial, hit));
    })?;
    Ok(out)
}

/// Mean and sample standard deviation of accuracy over seeds, per distractor count.
pub fn retrieval_curve(
    captions: &EmbeddingTable,
    images: &EmbeddingTable,
    pairs: &[(String, String)],
    ns: &[usize],
    seeds: &[u64],
) -> Result<RetrievalCurve> {
    if ns.is_empty() || seeds.is_empty() {
        return Err(Error::Empty("distractor counts or seeds"));
    }
    let (pool, _) = build_pool(captions, images, pairs)?;
    let needed = ns.iter().max().expect("nonempty") + 1;
    if pool.images.len() < needed {
        return Err(Error::InsufficientPool { needed, available: pool.images.len() });
    }
    let mut per_seed = BTreeMap::new();
    for &n in ns {
        let accs = seeds.iter().map(|&s| run_trials(&pool, n, s, |_, _, _| {})).collect::<Result<Vec<f64>>>()?;
        per_seed.insert(n, accs);
    }
    Ok(RetrievalCurve::from_per_seed(seeds.to_vec(), pairs.len(), per_seed))
}

impl RetrievalCurve {
    /// Summarize per-seed accuracies (each list in `seeds` order).
    pub fn from_per_seed(seeds: Vec<u64>, trials_per_seed: usize, per_seed: BTreeMap<usize, Vec<f64>>) -> Self {
        let points = per_seed
            .iter()
            .map(|(&n, accs)| {
                let (mean, std) = mean_std(accs);
                CurvePoint { distractors: n, mean, std }
            })
            .collect();
        Self { points, seeds, trials_per_seed, per_seed }
    }
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, libm::sqrt(var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    #[test]
    fn trial_rules() {
        assert!(retrieval_trial(&[1.0, 0.0], &[1.0, 0.0], &[]).unwrap());
        assert!(retrieval_trial(&[1.0, 0.0], &[2.0, 0.0], &[&[0.0, 1.0]]).unwrap());
        assert!(!retrieval_trial(&[1.0, 1.0], &[1.0, 0.0], &[&[0.0, 1.0]]).unwrap());
        assert_eq!(retrieval_trial(&[0.0, 0.0], &[1.0, 0.0], &[]), Err(Error::ZeroNorm));
    }

    fn identity_tables(n: usize) -> (EmbeddingTable, EmbeddingTable, Vec<(String, String)>) {
        let ids: Vec<String> = (0..n).map(|i| format!("i{i}")).collect();
        let mut data = vec![0.0f32; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        let caps: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let pairs = caps.iter().cloned().zip(ids.iter().cloned()).collect();
        (
            EmbeddingTable::new("s", n, caps, data.clone()).unwrap(),
            EmbeddingTable::new("s", n, ids, data).unwrap(),
            pairs,
        )
    }

    #[test]
    fn aligned_pairs_always_hit() {
        let (c, i, pairs) = identity_tables(6);
        let curve = retrieval_curve(&c, &i, &pairs, &[1, 3, 5], &[0, 1]).unwrap();
        assert!(curve.points.iter().all(|p| p.mean == 1.0 && p.std == 0.0));
        assert_eq!(
            retrieval_curve(&c, &i, &pairs, &[6], &[0]).map(|_| ()),
            Err(Error::InsufficientPool { needed: 7, available: 6 })
        );
    }

    #[test]
    fn trials_are_deterministic_and_exclude_target() {
        let (c, i, pairs) = identity_tables(8);
        let a = enumerate_trials(&c, &i, &pairs, 4, 9).unwrap();
        assert_eq!(a, enumerate_trials(&c, &i, &pairs, 4, 9).unwrap());
        for (t, _) in &a {
            assert!(!t.distractor_ids.contains(&t.target_id));
            let mut d = t.distractor_ids.clone();
            d.sort();
            d.dedup();
            assert_eq!(d.len(), 4);
        }
    }

    #[test]
    fn sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-12);
    }
}
