use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::EmbeddingTable;
use crate::vector::{cosine, norm};
use crate::{Error, Result};

/// Weight applied to the clamped cosine in CLIPScore.
pub const CLIP_WEIGHT: f64 = 2.5;

/// `2.5 · max(cos(caption, image), 0)`.
pub fn clip_score(caption: &[f32], image: &[f32]) -> Result<f64> {
    Ok(CLIP_WEIGHT * cosine(caption, image)?.max(0.0))
}

fn harmonic(a: f64, b: f64) -> f64 {
    if a + b == 0.0 {
        0.0
    } else {
        2.0 * a * b / (a + b)
    }
}

/// Harmonic mean of the image CLIPScore and the best reference term
/// `2.5 · max_r max(cos(caption, r), 0)`.
pub fn ref_clip_score(caption: &[f32], image: &[f32], references: &[&[f32]]) -> Result<f64> {
    if references.is_empty() {
        return Err(Error::Empty("reference embeddings"));
    }
    let mut best: f64 = 0.0;
    for r in references {
        best = best.max(cosine(caption, r)?);
    }
    Ok(harmonic(clip_score(caption, image)?, CLIP_WEIGHT * best.max(0.0)))
}

/// Mean cosine over all unordered pairs.
///
/// Computed from the sum of unit vectors: `Σ_{i<j} û_i·û_j = (|Σ û|² − n) / 2`.
pub fn clip_div_cos(embeddings: &[&[f32]]) -> Result<f64> {
    let n = embeddings.len();
    if n < 2 {
        return Err(Error::InvalidArgument("CLIP diversity needs at least two embeddings".into()));
    }
    let dim = embeddings[0].len();
    let mut sum = vec![0.0f64; dim];
    for e in embeddings {
        if e.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: e.len() });
        }
        let len = norm(e);
        if len == 0.0 {
            return Err(Error::ZeroNorm);
        }
        for (s, &v) in sum.iter_mut().zip(e.iter()) {
            *s += v as f64 / len;
        }
    }
    let sq: f64 = sum.iter().map(|v| v * v).sum();
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(((sq - n as f64) / 2.0 / pairs).clamp(-1.0, 1.0))
}

/// Group reference embedding ids by image: `"<image>#<k>"` belongs to `<image>`;
/// an id without `#` is its own group.
pub fn group_reference_ids(table: &EmbeddingTable) -> BTreeMap<String, Vec<usize>> {
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (row, id) in table.ids().iter().enumerate() {
        let key = id.rsplit_once('#').map_or(id.as_str(), |(image, _)| image);
        groups.entry(String::from(key)).or_default().push(row);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_examples() {
        assert_eq!(clip_score(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 2.5);
        assert_eq!(clip_score(&[1.0, 0.0], &[-1.0, 0.0]).unwrap(), 0.0);
        let c = clip_score(&[0.3, 0.953_939_2], &[1.0, 0.0]).unwrap();
        assert!((c - 0.75).abs() < 1e-6);
    }

    #[test]
    fn ref_clip_examples() {
        let v: &[f32] = &[0.6, 0.8];
        assert!((ref_clip_score(v, v, &[v, v]).unwrap() - 2.5).abs() < 1e-12);
        assert_eq!(ref_clip_score(&[1.0, 0.0], &[1.0, 0.0], &[&[0.0, 1.0]]).unwrap(), 0.0);
        assert!((harmonic(2.5, 1.25) - 5.0 / 3.0).abs() < 1e-12);
        assert!(ref_clip_score(v, v, &[]).is_err());
    }

    #[test]
    fn div_cos_examples() {
        let a: &[f32] = &[1.0, 0.0];
        let b: &[f32] = &[0.0, 1.0];
        assert!((clip_div_cos(&[a, a, a]).unwrap() - 1.0).abs() < 1e-12);
        assert!(clip_div_cos(&[a, b]).unwrap().abs() < 1e-12);
        assert!((clip_div_cos(&[a, b, a]).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!(clip_div_cos(&[a]).is_err());
        assert_eq!(clip_div_cos(&[a, &[0.0, 0.0]]), Err(Error::ZeroNorm));
    }

    #[test]
    fn reference_grouping() {
        let t = EmbeddingTable::new(
            "s",
            1,
            vec!["im#1".into(), "im#2".into(), "a#b#0".into(), "solo".into()],
            vec![1.0; 4],
        )
        .unwrap();
        let g = group_reference_ids(&t);
        assert_eq!(g["im"], vec![0, 1]);
        assert_eq!(g["a#b"], vec![2]);
        assert_eq!(g["solo"], vec![3]);
    }
}
