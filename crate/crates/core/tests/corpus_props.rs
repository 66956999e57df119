use std::collections::{BTreeMap, BTreeSet};

use aec_core::analysis::{majority_stats, strong_majority_labels, MajorityRule};
use aec_core::corpus::{
    build_vocabulary, deduplicate, select_seed_neighbors, split, AnnotationCorpus, AnnotationRecord, EmbeddingTable,
    SourceDataset,
};
use aec_core::EmotionLabel;
use proptest::prelude::*;

fn table(prefix: &str, points: &[Vec<f32>]) -> EmbeddingTable {
    let dim = points.first().map_or(1, Vec::len);
    let ids = (0..points.len()).map(|i| format!("{prefix}{i:03}")).collect();
    EmbeddingTable::new("s", dim, ids, points.concat()).unwrap()
}

fn points(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec<f32>>> {
    // Small integer grid so that exact ties and duplicates occur.
    prop::collection::vec(prop::collection::vec((-3i8..=3).prop_map(f32::from), 2), n)
}

fn record(image: &str, emotion: EmotionLabel, text: &str) -> AnnotationRecord {
    AnnotationRecord::new(image, SourceDataset::Coco, emotion, text, None, None, None).unwrap()
}

fn labelled_corpus() -> impl Strategy<Value = AnnotationCorpus> {
    prop::collection::vec((0usize..6, 0usize..9, prop::collection::vec("[a-e]", 1..6)), 1..40).prop_map(|rows| {
        let records = rows
            .into_iter()
            .map(|(img, e, words)| record(&format!("img{img}"), EmotionLabel::from_index(e).unwrap(), &words.join(" ")))
            .collect();
        AnnotationCorpus::new(records).unwrap()
    })
}

proptest! {
    #[test]
    fn neighbors_match_full_sort(queries in points(1..5), pool in points(1..15), k in 1usize..5) {
        let (q, p) = (table("q", &queries), table("p", &pool));
        let fast = select_seed_neighbors(&q, &p, k).unwrap();
        let mut expected = BTreeSet::new();
        for (_, query) in q.iter() {
            let mut all: Vec<(f64, String)> = p
                .iter()
                .map(|(id, v)| (query.iter().zip(v).map(|(a, b)| ((a - b) as f64).powi(2)).sum(), id.to_string()))
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            expected.extend(all.into_iter().take(k).map(|(_, id)| id));
        }
        prop_assert_eq!(fast, expected);
    }

    #[test]
    fn dedup_is_transitive_closure(pts in points(1..20), eps in 0.0f64..2.5) {
        let t = table("x", &pts);
        let n = pts.len();
        let close = |i: usize, j: usize| {
            pts[i].iter().zip(&pts[j]).map(|(a, b)| ((a - b) as f64).powi(2)).sum::<f64>() <= eps * eps
        };
        // Floyd–Warshall style reachability.
        let mut reach: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| close(i, j)).collect()).collect();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
                }
            }
        }
        let mut expected: BTreeSet<Vec<String>> = BTreeSet::new();
        for row in &reach {
            let group: Vec<String> = (0..n).filter(|&j| row[j]).map(|j| format!("x{j:03}")).collect();
            if group.len() > 1 {
                expected.insert(group);
            }
        }
        let got: BTreeSet<Vec<String>> = deduplicate(&t, eps).unwrap().into_iter().collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn split_partitions_images(corpus in labelled_corpus(), seed in any::<u64>()) {
        prop_assume!(corpus.num_images() >= 3);
        let s = split(&corpus, [0.6, 0.2, 0.2], seed).unwrap();
        prop_assert_eq!(s.sizes().iter().sum::<usize>(), corpus.num_images());
        for id in corpus.image_ids() {
            prop_assert!(s.get(id).is_some());
        }
        prop_assert_eq!(s, split(&corpus, [0.6, 0.2, 0.2], seed).unwrap());
    }

    #[test]
    fn vocabulary_shrinks_with_min_count(corpus in labelled_corpus(), a in 1usize..4, b in 0usize..3) {
        let small = build_vocabulary(&corpus, a + b).unwrap();
        let big = build_vocabulary(&corpus, a).unwrap();
        prop_assert!(small.len() <= big.len());
        for t in &small.tokens()[4..] {
            prop_assert!(big.contains(t));
        }
    }

    #[test]
    fn majority_matches_brute_force(corpus in labelled_corpus()) {
        let rule = MajorityRule::default();
        let mut by_image: BTreeMap<&str, Vec<EmotionLabel>> = BTreeMap::new();
        for r in corpus.records() {
            by_image.entry(&r.image_id).or_default().push(r.emotion);
        }
        let mut unique = BTreeMap::new();
        let mut strong = 0;
        for (img, labels) in &by_image {
            for label in EmotionLabel::ALL {
                let c = labels.iter().filter(|&&l| l == label).count();
                if 2 * c > labels.len() {
                    strong += 1;
                    unique.insert(img.to_string(), label);
                }
            }
        }
        let stats = majority_stats(&corpus, rule).unwrap();
        prop_assert_eq!(stats.strong_majority_images, strong);
        prop_assert_eq!(stats.tied_majority_images, 0);
        prop_assert_eq!(strong_majority_labels(&corpus, rule), unique);
    }
}
